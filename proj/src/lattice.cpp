#include "pcris/lattice.hpp"

#include "pcris/intpoly.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <numeric>

namespace pcris {

namespace {

using Rat = boost::multiprecision::cpp_rational;
using RatMat = std::vector<std::vector<Rat>>;
using IntMat = std::vector<std::vector<BigInt>>;

std::int64_t ipow(std::int64_t p, std::uint32_t e) {
    std::int64_t r = 1;
    for (std::uint32_t i = 0; i < e; ++i) r *= p;
    return r;
}

// Basis of {x : A x = 0} over Q (A has `cols` columns).
RatMat rational_kernel(RatMat a, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < a.size(); ++c) {
        std::size_t piv = row;
        while (piv < a.size() && a[piv][c] == 0) ++piv;
        if (piv == a.size()) continue;
        std::swap(a[piv], a[row]);
        Rat inv = 1 / a[row][c];
        for (auto& v : a[row]) v *= inv;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == row || a[i][c] == 0) continue;
            Rat f = a[i][c];
            for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[row][j];
        }
        pivots.push_back(c);
        ++row;
    }
    RatMat basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (std::find(pivots.begin(), pivots.end(), f) != pivots.end()) continue;
        std::vector<Rat> v(cols, 0);
        v[f] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::size_t rational_rank(const RatMat& a, std::size_t cols) {
    return cols - rational_kernel(a, cols).size();
}

std::vector<BigInt> clear_denominators(const std::vector<Rat>& v) {
    BigInt l = 1;
    for (const auto& x : v) l = boost::multiprecision::lcm(l, BigInt(denominator(x)));
    std::vector<BigInt> out;
    for (const auto& x : v) out.push_back(BigInt(numerator(x)) * (l / BigInt(denominator(x))));
    return out;
}

// Saturated basis of {x in Z^cols : E x = 0}, by unimodular column operations on [E; I].
IntMat integer_kernel(const IntMat& e, std::size_t cols) {
    IntMat m = e;
    const std::size_t rows = e.size();
    for (std::size_t j = 0; j < cols; ++j) {
        std::vector<BigInt> id(cols, 0);
        id[j] = 1;
        m.push_back(id);
    }
    auto col_combine = [&](std::size_t a, std::size_t b, const BigInt& x, const BigInt& y, const BigInt& u,
                           const BigInt& v) {
        // (col a, col b) <- (x*a + y*b, u*a + v*b)
        for (auto& r : m) {
            BigInt na = x * r[a] + y * r[b];
            BigInt nb = u * r[a] + v * r[b];
            r[a] = na;
            r[b] = nb;
        }
    };
    std::size_t lead = 0;
    for (std::size_t r = 0; r < rows && lead < cols; ++r) {
        for (std::size_t c = lead + 1; c < cols; ++c) {
            if (m[r][c] == 0) continue;
            if (m[r][lead] == 0) {
                col_combine(lead, c, 0, 1, 1, 0);
                continue;
            }
            // extended gcd
            BigInt a = m[r][lead], b = m[r][c];
            BigInt old_r = a, rr = b, old_s = 1, s = 0, old_t = 0, t = 1;
            while (rr != 0) {
                BigInt q = old_r / rr;
                BigInt tmp = old_r - q * rr;
                old_r = rr;
                rr = tmp;
                tmp = old_s - q * s;
                old_s = s;
                s = tmp;
                tmp = old_t - q * t;
                old_t = t;
                t = tmp;
            }
            const BigInt g = old_r;
            col_combine(lead, c, old_s, old_t, -b / g, a / g);
        }
        if (m[r][lead] != 0) ++lead;
    }
    IntMat basis;
    for (std::size_t c = lead; c < cols; ++c) {
        std::vector<BigInt> v;
        for (std::size_t j = 0; j < cols; ++j) v.push_back(m[rows + j][c]);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Row Hermite normal form (positive pivots, entries above pivots reduced into [0, pivot)).
IntMat hermite_rows(IntMat m, std::size_t cols) {
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
        while (true) {
            std::size_t best = m.size();
            for (std::size_t i = row; i < m.size(); ++i)
                if (m[i][c] != 0 && (best == m.size() || abs(m[i][c]) < abs(m[best][c]))) best = i;
            if (best == m.size()) break;
            std::swap(m[row], m[best]);
            bool done = true;
            for (std::size_t i = row + 1; i < m.size(); ++i) {
                if (m[i][c] == 0) continue;
                BigInt q = m[i][c] / m[row][c];
                for (std::size_t j = 0; j < cols; ++j) m[i][j] -= q * m[row][j];
                if (m[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (row >= m.size() || m[row][c] == 0) continue;
        if (m[row][c] < 0)
            for (auto& v : m[row]) v = -v;
        for (std::size_t i = 0; i < row; ++i) {
            BigInt q = m[i][c] / m[row][c];
            if (m[i][c] - q * m[row][c] < 0) q -= 1;
            for (std::size_t j = 0; j < cols; ++j) m[i][j] -= q * m[row][j];
        }
        ++row;
    }
    m.resize(row);
    return m;
}

}  // namespace

std::string to_string(ChartKind k) {
    switch (k) {
        case ChartKind::free_nonneg: return "free_nonneg";
        case ChartKind::free_group: return "free_group";
        case ChartKind::padic_nonneg: return "padic_nonneg";
        case ChartKind::padic_group: return "padic_group";
    }
    return "?";
}

bool MonoidChart::contains(const std::vector<PadicExponent>& x) const {
    if (x.size() != rank) return false;
    const std::uint32_t max_level = padic() ? level : 0;
    for (const auto& v : x) {
        if (v.level() > max_level) return false;
        if (!group() && v.sign() < 0) return false;
    }
    return true;
}

std::string MonoidChart::str() const {
    return to_string(kind) + "(rank=" + std::to_string(rank) + ", level=" + std::to_string(level) +
           ", p=" + std::to_string(p) + ")";
}

MonoidChart perfection(const MonoidChart& c, std::uint32_t levels) {
    MonoidChart out = c;
    if (c.kind == ChartKind::free_nonneg) out.kind = ChartKind::padic_nonneg;
    if (c.kind == ChartKind::free_group) out.kind = ChartKind::padic_group;
    out.level = c.level + levels;
    return out;
}

std::vector<PadicExponent> frobenius_monoid(const MonoidChart& c, const std::vector<PadicExponent>& x) {
    if (!c.contains(x)) throw PreconditionError("frobenius_monoid: element not in " + c.str());
    std::vector<PadicExponent> out;
    for (const auto& v : x) out.push_back(v.times(c.p));
    return out;
}

bool frobenius_surjective_onto_lower_level(const MonoidChart& c) { return c.padic() && c.level >= 1; }

std::vector<std::vector<PadicExponent>> kernel_L(const std::vector<MonoidChart>& domain, const MonoidChart& target,
                                                 const std::vector<std::vector<std::int64_t>>& structure_map,
                                                 std::size_t orient_block) {
    if (domain.empty()) throw PreconditionError("kernel_L: empty domain");
    const std::uint32_t p = target.p;
    std::size_t total = 0;
    std::vector<std::size_t> offset;
    for (const auto& c : domain) {
        if (c.p != p) throw PreconditionError("kernel_L: mixed primes");
        offset.push_back(total);
        total += c.rank;
    }
    if (structure_map.size() != target.rank) throw PreconditionError("kernel_L: structure map has wrong row count");
    for (const auto& row : structure_map)
        if (row.size() != total) throw PreconditionError("kernel_L: structure map has wrong column count");
    if (orient_block == std::numeric_limits<std::size_t>::max()) orient_block = domain.size() - 1;
    if (orient_block >= domain.size()) throw PreconditionError("kernel_L: orientation block out of range");

    // coordinates split into p-divisible (padic) and discrete ones
    std::vector<std::size_t> padic_idx, free_idx;
    for (std::size_t b = 0; b < domain.size(); ++b)
        for (std::uint32_t j = 0; j < domain[b].rank; ++j)
            (domain[b].padic() ? padic_idx : free_idx).push_back(offset[b] + j);

    RatMat a;
    for (const auto& row : structure_map) {
        std::vector<Rat> r;
        for (auto v : row) r.emplace_back(v);
        a.push_back(std::move(r));
    }
    const RatMat kq = rational_kernel(a, total);
    if (kq.empty()) return {};

    RatMat zparts;
    for (const auto& v : kq) {
        std::vector<Rat> z;
        for (auto i : free_idx) z.push_back(v[i]);
        zparts.push_back(std::move(z));
    }
    const std::size_t b = free_idx.size();
    if (b == 0 || rational_rank(zparts, b) != kq.size())
        throw PreconditionError("kernel_L: unsupported chart combination (p-divisible part meets the kernel)");

    // lattice of discrete parts: span(zparts) intersected with Z^b
    IntMat eqs;
    for (const auto& v : rational_kernel(zparts, b)) eqs.push_back(clear_denominators(v));
    IntMat lam;
    if (eqs.empty()) {
        for (std::size_t j = 0; j < b; ++j) {
            std::vector<BigInt> v(b, 0);
            v[j] = 1;
            lam.push_back(v);
        }
    } else {
        lam = integer_kernel(eqs, b);
    }
    lam = hermite_rows(lam, b);

    // recover the p-divisible coordinates: solve zparts^T c = z, x = sum c_j kq_j
    std::vector<std::vector<PadicExponent>> out;
    for (const auto& z : lam) {
        RatMat sys;  // rows: one per discrete coordinate, columns: c_j then rhs
        for (std::size_t i = 0; i < b; ++i) {
            std::vector<Rat> r;
            for (const auto& zp : zparts) r.push_back(zp[i]);
            r.emplace_back(z[i]);
            sys.push_back(std::move(r));
        }
        // solve via kernel of [M | -z] with last coordinate 1
        for (auto& r : sys) r.back() = -r.back();
        const RatMat ker = rational_kernel(sys, kq.size() + 1);
        const std::vector<Rat>* sol = nullptr;
        for (const auto& k : ker)
            if (k.back() != 0) sol = &k;
        if (!sol) throw PcrisError("kernel_L: internal solve failure");
        std::vector<Rat> c(kq.size());
        for (std::size_t j = 0; j < kq.size(); ++j) c[j] = (*sol)[j] / sol->back();
        std::vector<Rat> x(total, 0);
        for (std::size_t j = 0; j < kq.size(); ++j)
            for (std::size_t i = 0; i < total; ++i) x[i] += c[j] * kq[j][i];

        std::vector<PadicExponent> vec;
        for (std::size_t i = 0; i < total; ++i) {
            BigInt num = numerator(x[i]), den = denominator(x[i]);
            std::uint32_t level = 0;
            while (den % p == 0) {
                den /= p;
                ++level;
            }
            if (den != 1)
                throw PreconditionError("kernel_L: unsupported chart combination (denominator prime to p)");
            const bool is_padic = std::find(padic_idx.begin(), padic_idx.end(), i) != padic_idx.end();
            if (!is_padic && level > 0) throw PcrisError("kernel_L: fractional discrete coordinate");
            vec.emplace_back(static_cast<std::int64_t>(num), level, p);
        }
        out.push_back(std::move(vec));
    }
    for (auto& v : out) {
        for (std::uint32_t j = 0; j < domain[orient_block].rank; ++j) {
            const auto& e = v[offset[orient_block] + j];
            if (e.is_zero()) continue;
            if (e.sign() < 0)
                for (auto& x : v) x = -x;
            break;
        }
    }
    return out;
}

std::string to_string(CMode c) { return c == CMode::one ? "one" : "pi"; }

CMode parse_cmode(const std::string& s) {
    if (s == "one" || s == "1") return CMode::one;
    if (s == "pi") return CMode::pi;
    throw PreconditionError("unknown c mode '" + s + "' (expected one|pi)");
}

std::int64_t LatticeShape::denom() const { return ipow(p, m); }

bool ExponentVec::is_zero() const {
    return std::all_of(num.begin(), num.end(), [](std::int64_t v) { return v == 0; });
}

ExponentVec zero_exponent(const LatticeShape& s) { return ExponentVec{std::vector<std::int64_t>(s.size(), 0)}; }

ExponentVec unit_exponent(const LatticeShape& s, std::size_t coord, std::int64_t numerator_over_pm) {
    ExponentVec e = zero_exponent(s);
    e.num.at(coord) = numerator_over_pm;
    return e;
}

ExponentVec from_padic(const LatticeShape& s, const std::vector<PadicExponent>& coords) {
    if (coords.size() != s.size()) throw PreconditionError("exponent vector has wrong length");
    ExponentVec e;
    for (const auto& c : coords) {
        if (c.level() > s.m)
            throw ExponentOverflow("denominator of " + c.str() + " exceeds p^" + std::to_string(s.m));
        e.num.push_back(c.scaled(s.m));
    }
    return e;
}

std::vector<PadicExponent> to_padic(const LatticeShape& s, const ExponentVec& e) {
    std::vector<PadicExponent> out;
    for (auto v : e.num) out.emplace_back(v, s.m, s.p);
    return out;
}

std::string exponent_str(const LatticeShape& s, const ExponentVec& e) {
    std::string out = "(";
    for (std::size_t i = 0; i < e.num.size(); ++i) {
        if (i == s.pi_index()) out += " | ";
        else if (i) out += ", ";
        out += PadicExponent(e.num[i], s.m, s.p).str();
    }
    return out + ")";
}

ExponentVec normalize_semistable(const LatticeShape& s, const ExponentVec& e) {
    if (s.c == CMode::one || s.r == 0) return e;
    std::int64_t mu = *std::min_element(e.num.begin(), e.num.begin() + s.r);
    ExponentVec out = e;
    for (std::size_t i = 0; i < s.r; ++i) out.num[i] -= mu;
    out.num[s.pi_index()] += mu;
    return out;
}

bool in_sector(const LatticeShape& s, const ExponentVec& e) {
    if (e.num.size() != s.size()) return false;
    for (std::size_t i = 0; i < s.r; ++i)
        if (e.num[i] < 0) return false;
    if (e.num[s.pi_index()] < 0) return false;
    return std::all_of(e.num.begin(), e.num.end(), [&](std::int64_t v) { return v <= s.N && v >= -s.N; });
}

void check_exponent(const LatticeShape& s, const ExponentVec& e) {
    if (e.num.size() != s.size()) throw PreconditionError("exponent vector has wrong length");
    for (auto v : e.num)
        if (v > s.N || v < -s.N) throw ExponentOverflow(exponent_str(s, e) + " beyond numerator bound " + std::to_string(s.N));
    for (std::size_t i = 0; i < s.r; ++i)
        if (e.num[i] < 0) throw PreconditionError("exponent " + exponent_str(s, e) + " outside the sector");
    if (e.num[s.pi_index()] < 0) throw PreconditionError("exponent " + exponent_str(s, e) + " outside the sector");
}

ExponentVec add_exponents(const LatticeShape& s, const ExponentVec& a, const ExponentVec& b) {
    ExponentVec e = a;
    for (std::size_t i = 0; i < e.num.size(); ++i) e.num[i] += b.num.at(i);
    e = normalize_semistable(s, e);
    check_exponent(s, e);
    return e;
}

PadicExponent character(const LatticeShape& s, const ExponentVec& e, std::size_t i) {
    if (i < 2 || i > s.d + 1) throw PreconditionError("direction must lie in 2..d+1");
    std::int64_t v = e.num.at(i - 1);
    if (i <= s.r) v -= e.num.at(0);
    return PadicExponent(v, s.m, s.p);
}

std::vector<std::int64_t> character_vector(const LatticeShape& s, const ExponentVec& e) {
    std::vector<std::int64_t> out;
    for (std::size_t i = 2; i <= s.d + 1; ++i) out.push_back(i <= s.r ? e.num[i - 1] - e.num[0] : e.num[i - 1]);
    return out;
}

std::vector<ExponentVec> enumerate_exponents(const LatticeShape& s) {
    std::vector<ExponentVec> out;
    ExponentVec e = zero_exponent(s);
    const std::size_t len = s.size();
    auto lo = [&](std::size_t i) { return (i < s.r || i == s.pi_index()) ? std::int64_t{0} : -s.N; };
    for (std::size_t i = 0; i < len; ++i) e.num[i] = lo(i);
    while (true) {
        if (normalize_semistable(s, e) == e) out.push_back(e);
        std::size_t i = 0;
        while (i < len && e.num[i] == s.N) {
            e.num[i] = lo(i);
            ++i;
        }
        if (i == len) break;
        ++e.num[i];
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace pcris
