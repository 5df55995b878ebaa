#include "pcris/witt.hpp"

#include <map>
#include <mutex>

namespace pcris {

QuotientPolyRing::QuotientPolyRing(std::int64_t q, std::vector<std::int64_t> f_low, std::string name)
    : q_(q), e_(f_low.size()), f_(std::move(f_low)), name_(std::move(name)) {
    if (q_ < 2) throw std::invalid_argument("QuotientPolyRing: modulus must be >= 2");
    if (e_ == 0) throw std::invalid_argument("QuotientPolyRing: degree must be >= 1");
    for (auto& c : f_) c = red(c);
}

QuotientPolyRing QuotientPolyRing::zmod(std::int64_t q) {
    return QuotientPolyRing(q, {0}, "Z/" + std::to_string(q));
}

QuotientPolyRing QuotientPolyRing::truncated(std::int64_t q, std::size_t e) {
    if (e == 1) return zmod(q);
    return QuotientPolyRing(q, std::vector<std::int64_t>(e, 0), "Z/" + std::to_string(q) + "[s]/(s^" + std::to_string(e) + ")");
}

QuotientPolyRing QuotientPolyRing::f4() { return QuotientPolyRing(2, {1, 1}, "F_4"); }

QuotientPolyRing::Elem QuotientPolyRing::one() const {
    Elem r(e_, 0);
    r[0] = 1 % q_;
    return r;
}

QuotientPolyRing::Elem QuotientPolyRing::s() const {
    if (e_ < 2) throw std::logic_error("QuotientPolyRing: no generator in degree 1");
    Elem r(e_, 0);
    r[1] = 1;
    return r;
}

QuotientPolyRing::Elem QuotientPolyRing::add(const Elem& a, const Elem& b) const {
    Elem r(e_);
    for (std::size_t i = 0; i < e_; ++i) r[i] = red(a[i] + b[i]);
    return r;
}

QuotientPolyRing::Elem QuotientPolyRing::sub(const Elem& a, const Elem& b) const {
    Elem r(e_);
    for (std::size_t i = 0; i < e_; ++i) r[i] = red(a[i] - b[i]);
    return r;
}

QuotientPolyRing::Elem QuotientPolyRing::neg(const Elem& a) const { return sub(zero(), a); }

QuotientPolyRing::Elem QuotientPolyRing::mul(const Elem& a, const Elem& b) const {
    std::vector<std::int64_t> t(2 * e_ - 1, 0);
    for (std::size_t i = 0; i < e_; ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < e_; ++j) t[i + j] = red(t[i + j] + a[i] * b[j]);
    }
    for (std::size_t d = t.size(); d-- > e_;) {
        std::int64_t c = t[d];
        if (!c) continue;
        t[d] = 0;
        for (std::size_t i = 0; i < e_; ++i) t[d - e_ + i] = red(t[d - e_ + i] - c * f_[i]);
    }
    t.resize(e_);
    return t;
}

QuotientPolyRing::Elem QuotientPolyRing::pow(Elem a, std::uint64_t k) const {
    Elem r = one();
    while (k) {
        if (k & 1) r = mul(r, a);
        a = mul(a, a);
        k >>= 1;
    }
    return r;
}

QuotientPolyRing::Elem QuotientPolyRing::from_int(const BigInt& z) const {
    BigInt r = z % q_;
    if (r < 0) r += q_;
    Elem e(e_, 0);
    e[0] = static_cast<std::int64_t>(r);
    return e;
}

std::uint64_t QuotientPolyRing::size() const {
    std::uint64_t s = 1;
    for (std::size_t i = 0; i < e_; ++i) {
        s *= static_cast<std::uint64_t>(q_);
        if (s > (1ULL << 40)) return s;
    }
    return s;
}

QuotientPolyRing::Elem QuotientPolyRing::from_index(std::uint64_t idx) const {
    Elem r(e_);
    for (std::size_t i = 0; i < e_; ++i) {
        r[i] = static_cast<std::int64_t>(idx % static_cast<std::uint64_t>(q_));
        idx /= static_cast<std::uint64_t>(q_);
    }
    return r;
}

std::vector<QuotientPolyRing::Elem> QuotientPolyRing::elements() const {
    std::uint64_t n = size();
    if (n > (1ULL << 20)) throw std::length_error("QuotientPolyRing: too many elements to enumerate");
    std::vector<Elem> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(from_index(i));
    return out;
}

std::string QuotientPolyRing::str(const Elem& a) const {
    std::string s;
    for (std::size_t i = 0; i < e_; ++i) {
        if (!a[i]) continue;
        if (!s.empty()) s += "+";
        s += std::to_string(a[i]);
        if (i == 1) s += "s";
        if (i > 1) s += "s^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

IntPoly ghost_poly(std::uint32_t p, std::size_t k, std::size_t nvars, std::size_t offset) {
    IntPoly w(nvars);
    BigInt pj = 1;
    for (std::size_t j = 0; j <= k; ++j) {
        std::uint64_t e = 1;
        for (std::size_t r = 0; r < k - j; ++r) e *= p;
        w = w + IntPoly::variable(nvars, offset + j).pow(e).scaled(pj);
        pj *= p;
    }
    return w;
}

namespace {

// Solve w_k(R) = G_k for R_0, R_1, ... recursively.
std::vector<IntPoly> solve_ghost(std::uint32_t p, std::uint32_t n, std::size_t nvars,
                                 const std::vector<IntPoly>& G) {
    std::vector<IntPoly> R;
    BigInt pk = 1;
    for (std::uint32_t k = 0; k < n; ++k) {
        IntPoly rest = G[k];
        BigInt pj = 1;
        for (std::uint32_t j = 0; j < k; ++j) {
            std::uint64_t e = 1;
            for (std::uint32_t r = 0; r < k - j; ++r) e *= p;
            rest = rest - R[j].pow(e).scaled(pj);
            pj *= p;
        }
        R.push_back(rest.divided_exactly(pk));
        pk *= p;
    }
    (void)nvars;
    return R;
}

}  // namespace

WittPolys WittPolys::compute(std::uint32_t p, std::uint32_t n) {
    WittPolys w;
    w.p = p;
    w.n = n;
    std::size_t nv = 2 * n;
    std::vector<IntPoly> gs, gp, gn, gf;
    for (std::uint32_t k = 0; k < n; ++k) {
        IntPoly wx = ghost_poly(p, k, nv, 0), wy = ghost_poly(p, k, nv, n);
        gs.push_back(wx + wy);
        gp.push_back(wx * wy);
        gn.push_back(ghost_poly(p, k, n, 0).scaled(-1));
        gf.push_back(ghost_poly(p, k + 1, n + 1, 0));
    }
    w.sum = solve_ghost(p, n, nv, gs);
    w.product = solve_ghost(p, n, nv, gp);
    w.negation = solve_ghost(p, n, n, gn);
    w.frobenius = solve_ghost(p, n, n + 1, gf);
    return w;
}

std::shared_ptr<const WittPolys> WittPolys::get(std::uint32_t p, std::uint32_t n) {
    static std::mutex mu;
    static std::map<std::pair<std::uint32_t, std::uint32_t>, std::shared_ptr<const WittPolys>> cache;
    const auto key = std::make_pair(p, n);
    {
        std::lock_guard lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto fresh = std::make_shared<const WittPolys>(compute(p, n));
    std::lock_guard lock(mu);
    auto [it, inserted] = cache.emplace(key, fresh);
    return it->second;
}

}  // namespace pcris
