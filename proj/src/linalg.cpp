#include "pcris/linalg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pcris {

ModMatrix ModMatrix::identity(std::size_t n, const RingParams& params) {
    ModMatrix m(n, n, params);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1 % params.modulus();
    return m;
}

ModMatrix ModMatrix::operator*(const ModMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("ModMatrix: shape mismatch in product");
    ModMatrix r(rows_, o.cols_, params_);
    const std::uint64_t mod = params_.modulus();
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            std::uint64_t a = (*this)(i, k);
            if (!a) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) {
                std::uint64_t b = o(k, j);
                if (!b) continue;
                r(i, j) = static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b + r(i, j)) % mod);
            }
        }
    return r;
}

ModMatrix ModMatrix::operator+(const ModMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("ModMatrix: shape mismatch in sum");
    ModMatrix r = *this;
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = params_.add(a_[k], o.a_[k]);
    return r;
}

ModMatrix ModMatrix::operator-(const ModMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("ModMatrix: shape mismatch in difference");
    ModMatrix r = *this;
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = params_.sub(a_[k], o.a_[k]);
    return r;
}

ModMatrix ModMatrix::scaled(std::uint64_t c) const {
    ModMatrix r = *this;
    for (auto& v : r.a_) v = params_.mul(v, c);
    return r;
}

ModVec ModMatrix::apply(const ModVec& x) const {
    if (x.size() != cols_) throw std::invalid_argument("ModMatrix: vector length mismatch");
    ModVec y(rows_, 0);
    const std::uint64_t mod = params_.modulus();
    for (std::size_t i = 0; i < rows_; ++i) {
        unsigned __int128 acc = 0;
        for (std::size_t j = 0; j < cols_; ++j) {
            std::uint64_t a = (*this)(i, j);
            if (a && x[j]) acc = (acc + static_cast<unsigned __int128>(a) * x[j]) % mod;
        }
        y[i] = static_cast<std::uint64_t>(acc);
    }
    return y;
}

ModMatrix ModMatrix::transpose() const {
    ModMatrix r(cols_, rows_, params_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

bool ModMatrix::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](std::uint64_t v) { return v == 0; });
}

void ModMatrix::set_column(std::size_t j, const ModVec& v) {
    if (v.size() != rows_) throw std::invalid_argument("ModMatrix: column length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i] % params_.modulus();
}

ModVec ModMatrix::column(std::size_t j) const {
    ModVec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

void ModMatrix::add_block(std::size_t r0, std::size_t c0, const ModMatrix& b, bool negate) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw std::out_of_range("ModMatrix: block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
        for (std::size_t j = 0; j < b.cols_; ++j) {
            std::uint64_t v = b(i, j);
            if (!v) continue;
            auto& t = (*this)(r0 + i, c0 + j);
            t = negate ? params_.sub(t, v) : params_.add(t, v);
        }
}

std::string ModMatrix::coordinate_text() const {
    std::ostringstream os;
    os << "# " << rows_ << " x " << cols_ << " over Z/" << params_.modulus() << "\n";
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if ((*this)(i, j)) os << i << " " << j << " " << (*this)(i, j) << "\n";
    return os.str();
}

ModVec SmithForm::diagonal() const {
    ModVec d(std::min(rows, cols), 0);
    for (std::size_t i = 0; i < exponents.size(); ++i) d[i] = params.ppow(exponents[i]);
    return d;
}

std::uint64_t SmithForm::log_kernel_size() const {
    std::uint64_t s = 0;
    for (auto e : exponents) s += e;
    return s + static_cast<std::uint64_t>(params.n()) * (cols - rank());
}

std::uint64_t SmithForm::log_image_size() const {
    std::uint64_t s = 0;
    for (auto e : exponents) s += params.n() - e;
    return s;
}

SmithForm snf_local(const ModMatrix& input, bool with_transforms) {
    const RingParams& P = input.params();
    const std::size_t R = input.rows(), C = input.cols();
    const std::uint32_t n = P.n();
    SmithForm out;
    out.params = P;
    out.rows = R;
    out.cols = C;
    out.has_transforms = with_transforms;
    ModMatrix A = input;
    if (with_transforms) {
        out.U = ModMatrix::identity(R, P);
        out.V = ModMatrix::identity(C, P);
        out.Vinv = ModMatrix::identity(C, P);
    }
    auto swap_rows = [&](ModMatrix& M, std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < M.cols(); ++j) std::swap(M(a, j), M(b, j));
    };
    auto swap_cols = [&](ModMatrix& M, std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < M.rows(); ++i) std::swap(M(i, a), M(i, b));
    };
    // row_dst -= f * row_src
    auto row_axpy = [&](ModMatrix& M, std::size_t dst, std::size_t src, std::uint64_t f, std::size_t from) {
        for (std::size_t j = from; j < M.cols(); ++j)
            if (M(src, j)) M(dst, j) = P.sub(M(dst, j), P.mul(f, M(src, j)));
    };

    for (std::size_t k = 0; k < std::min(R, C); ++k) {
        std::uint32_t best = n;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = k; i < R && best > 0; ++i)
            for (std::size_t j = k; j < C; ++j) {
                std::uint64_t v = A(i, j);
                if (!v) continue;
                std::uint32_t e = P.val(v);
                if (e < best) {
                    best = e;
                    bi = i;
                    bj = j;
                    if (e == 0) break;
                }
            }
        if (best == n) break;
        swap_rows(A, k, bi);
        swap_cols(A, k, bj);
        if (with_transforms) {
            swap_rows(out.U, k, bi);
            swap_cols(out.V, k, bj);
            swap_rows(out.Vinv, k, bj);
        }
        const std::uint64_t pe = P.ppow(best);
        const std::uint64_t unit = A(k, k) / pe;
        const std::uint64_t uinv = P.inv(unit);
        for (std::size_t j = k; j < C; ++j) A(k, j) = P.mul(A(k, j), uinv);
        if (with_transforms)
            for (std::size_t j = 0; j < R; ++j) out.U(k, j) = P.mul(out.U(k, j), uinv);
        for (std::size_t i = k + 1; i < R; ++i) {
            std::uint64_t v = A(i, k);
            if (!v) continue;
            std::uint64_t f = v / pe;
            row_axpy(A, i, k, f, k);
            if (with_transforms) row_axpy(out.U, i, k, f, 0);
        }
        for (std::size_t j = k + 1; j < C; ++j) {
            std::uint64_t v = A(k, j);
            if (!v) continue;
            std::uint64_t g = v / pe;
            A(k, j) = 0;
            if (with_transforms) {
                for (std::size_t i = 0; i < C; ++i)
                    if (out.V(i, k)) out.V(i, j) = P.sub(out.V(i, j), P.mul(g, out.V(i, k)));
                for (std::size_t c = 0; c < C; ++c)
                    if (out.Vinv(j, c)) out.Vinv(k, c) = P.add(out.Vinv(k, c), P.mul(g, out.Vinv(j, c)));
            }
        }
        out.exponents.push_back(best);
    }
    return out;
}

std::vector<ModVec> kernel_generators(const SmithForm& s) {
    if (!s.has_transforms) throw std::logic_error("kernel_generators: Smith form computed without transforms");
    std::vector<ModVec> gens;
    const RingParams& P = s.params;
    for (std::size_t i = 0; i < s.cols; ++i) {
        std::uint64_t scale = 1 % P.modulus();
        if (i < s.rank()) {
            std::uint32_t e = s.exponents[i];
            if (e == 0) continue;
            scale = P.ppow(P.n() - e);
        }
        ModVec v(s.cols);
        for (std::size_t r = 0; r < s.cols; ++r) v[r] = P.mul(s.V(r, i), scale);
        gens.push_back(std::move(v));
    }
    return gens;
}

std::optional<ModVec> solve_linear(const SmithForm& s, const ModVec& b) {
    if (!s.has_transforms) throw std::logic_error("solve_linear: Smith form computed without transforms");
    if (b.size() != s.rows) throw std::invalid_argument("solve_linear: right-hand side length mismatch");
    const RingParams& P = s.params;
    ModVec c = s.U.apply(b);
    ModVec y(s.cols, 0);
    for (std::size_t i = 0; i < s.rows; ++i) {
        if (i < s.rank()) {
            std::uint64_t pe = P.ppow(s.exponents[i]);
            if (c[i] % pe != 0) return std::nullopt;
            y[i] = c[i] / pe;
        } else if (c[i] != 0) {
            return std::nullopt;
        }
    }
    return s.V.apply(y);
}

std::vector<std::uint32_t> homology_divisors(const ModMatrix& prev, const ModMatrix& next) {
    const RingParams& P = next.params();
    const std::uint32_t n = P.n();
    const std::size_t dim = next.cols();
    if (prev.rows() != dim) throw std::invalid_argument("homology_divisors: complex shapes do not match");
    SmithForm s = snf_local(next, true);
    // kernel coordinates: generator i has order p^{order[i]}
    std::vector<std::size_t> gen_index;
    std::vector<std::uint32_t> order;
    for (std::size_t i = 0; i < dim; ++i) {
        std::uint32_t e = i < s.rank() ? s.exponents[i] : n;
        if (e == 0) continue;
        gen_index.push_back(i);
        order.push_back(e);
    }
    const std::size_t g = gen_index.size();
    if (g == 0) return {};
    ModMatrix rel(g, g + prev.cols(), P);
    for (std::size_t k = 0; k < g; ++k) rel(k, k) = P.ppow(order[k]);
    for (std::size_t c = 0; c < prev.cols(); ++c) {
        ModVec y = s.Vinv.apply(prev.column(c));
        for (std::size_t k = 0; k < g; ++k) {
            std::size_t i = gen_index[k];
            std::uint64_t v = y[i];
            if (i < s.rank()) {
                std::uint64_t div = P.ppow(n - order[k]);
                if (div == 0 || v % div != 0) throw std::logic_error("homology_divisors: image not inside kernel");
                v /= div;
            }
            rel(k, g + c) = v;
        }
    }
    SmithForm q = snf_local(rel, false);
    std::vector<std::uint32_t> out;
    for (auto f : q.exponents)
        if (f > 0) out.push_back(f);
    for (std::size_t k = q.rank(); k < g; ++k) out.push_back(n);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace pcris
