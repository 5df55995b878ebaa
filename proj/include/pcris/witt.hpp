#pragma once

#include "pcris/intpoly.hpp"

#include <concepts>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcris {

/// A commutative coefficient ring for Witt vectors. characteristic() is 0 for
/// rings of characteristic zero.
template <class R>
concept CoeffRing = requires(const R& r, const typename R::Elem& a, const BigInt& z) {
    { r.zero() } -> std::convertible_to<typename R::Elem>;
    { r.one() } -> std::convertible_to<typename R::Elem>;
    { r.add(a, a) } -> std::convertible_to<typename R::Elem>;
    { r.sub(a, a) } -> std::convertible_to<typename R::Elem>;
    { r.mul(a, a) } -> std::convertible_to<typename R::Elem>;
    { r.from_int(z) } -> std::convertible_to<typename R::Elem>;
    { r.eq(a, a) } -> std::convertible_to<bool>;
    { r.characteristic() } -> std::convertible_to<BigInt>;
};

/// (Z/q)[s]/(f) for a monic f of degree e >= 1. Covers F_p, Z/p^k, F_p[s]/(s^k), F_4.
class QuotientPolyRing {
public:
    using Elem = std::vector<std::int64_t>;

    /// f_low holds f_0..f_{e-1}, so s^e = -(f_0 + f_1 s + ...).
    QuotientPolyRing(std::int64_t q, std::vector<std::int64_t> f_low, std::string name);
    static QuotientPolyRing zmod(std::int64_t q);
    static QuotientPolyRing truncated(std::int64_t q, std::size_t e);  // (Z/q)[s]/(s^e)
    static QuotientPolyRing f4();                                      // F_2[s]/(s^2+s+1)

    Elem zero() const { return Elem(e_, 0); }
    Elem one() const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem pow(Elem a, std::uint64_t k) const;
    Elem from_int(const BigInt& z) const;
    Elem from_int(std::int64_t z) const { return from_int(BigInt(z)); }
    Elem s() const;  // the adjoined generator (for e >= 2)
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    BigInt characteristic() const { return q_; }

    std::int64_t modulus() const { return q_; }
    std::size_t degree() const { return e_; }
    std::uint64_t size() const;  // q^e
    /// All elements when size() is small; throws beyond 2^20.
    std::vector<Elem> elements() const;
    Elem from_index(std::uint64_t idx) const;
    const std::string& name() const { return name_; }
    std::string str(const Elem& a) const;

private:
    std::int64_t red(std::int64_t v) const {
        std::int64_t r = v % q_;
        return r < 0 ? r + q_ : r;
    }
    std::int64_t q_;
    std::size_t e_;
    std::vector<std::int64_t> f_;
    std::string name_;
};

/// The integers, for exact ghost-component checks over a flat ring.
class IntegerRing {
public:
    using Elem = BigInt;
    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem from_int(const BigInt& z) const { return z; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    BigInt characteristic() const { return 0; }
    std::string str(const Elem& a) const { return a.str(); }
};

/// Perfection model: sequences (x^(0), ..., x^(L)) over a base ring with
/// x^(k+1)^p = x^(k), ring operations componentwise.
template <CoeffRing R>
class PerfectionRing {
public:
    using Elem = std::vector<typename R::Elem>;
    PerfectionRing(R base, std::uint32_t p, std::size_t levels) : base_(std::move(base)), p_(p), L_(levels) {}

    Elem zero() const { return Elem(L_ + 1, base_.zero()); }
    Elem one() const { return Elem(L_ + 1, base_.one()); }
    Elem add(const Elem& a, const Elem& b) const { return zip(a, b, [&](auto& x, auto& y) { return base_.add(x, y); }); }
    Elem sub(const Elem& a, const Elem& b) const { return zip(a, b, [&](auto& x, auto& y) { return base_.sub(x, y); }); }
    Elem mul(const Elem& a, const Elem& b) const { return zip(a, b, [&](auto& x, auto& y) { return base_.mul(x, y); }); }
    Elem from_int(const BigInt& z) const { return Elem(L_ + 1, base_.from_int(z)); }
    bool eq(const Elem& a, const Elem& b) const {
        for (std::size_t k = 0; k <= L_; ++k)
            if (!base_.eq(a[k], b[k])) return false;
        return true;
    }
    BigInt characteristic() const { return base_.characteristic(); }

    bool coherent(const Elem& a) const {
        for (std::size_t k = 0; k < L_; ++k) {
            auto v = base_.one();
            for (std::uint32_t i = 0; i < p_; ++i) v = base_.mul(v, a[k + 1]);
            if (!base_.eq(v, a[k])) return false;
        }
        return true;
    }
    /// The ring map P(R) -> R, x -> x^(m).
    typename R::Elem level(const Elem& a, std::size_t m) const { return a.at(m); }
    const R& base() const { return base_; }
    std::size_t levels() const { return L_; }

private:
    template <class F>
    Elem zip(const Elem& a, const Elem& b, F f) const {
        Elem r;
        r.reserve(L_ + 1);
        for (std::size_t k = 0; k <= L_; ++k) r.push_back(f(a[k], b[k]));
        return r;
    }
    R base_;
    std::uint32_t p_;
    std::size_t L_;
};

/// Universal integral polynomials for W_n over Z(p), solved from the ghost equations.
struct WittPolys {
    std::uint32_t p = 2;
    std::uint32_t n = 1;
    std::vector<IntPoly> sum;      // vars x_0..x_{n-1}, y_0..y_{n-1}
    std::vector<IntPoly> product;  // same variables
    std::vector<IntPoly> negation; // vars x_0..x_{n-1}
    std::vector<IntPoly> frobenius;  // vars x_0..x_n, F: W_{n+1} -> W_n

    /// Cached per (p, n); concurrent first calls may both compute, the first stored wins.
    static std::shared_ptr<const WittPolys> get(std::uint32_t p, std::uint32_t n);
    static WittPolys compute(std::uint32_t p, std::uint32_t n);
};

/// Ghost polynomial w_k in variables offset..offset+k of an nvars-variable ring.
IntPoly ghost_poly(std::uint32_t p, std::size_t k, std::size_t nvars, std::size_t offset);

template <CoeffRing R>
typename R::Elem evaluate(const IntPoly& f, const R& ring, const std::vector<typename R::Elem>& vals) {
    using E = typename R::Elem;
    if (vals.size() != f.nvars()) throw std::invalid_argument("evaluate: wrong number of values");
    std::vector<std::vector<E>> powers(vals.size());
    for (std::size_t v = 0; v < vals.size(); ++v) {
        std::uint32_t mx = f.max_exponent(v);
        powers[v].reserve(mx + 1);
        powers[v].push_back(ring.one());
        for (std::uint32_t k = 1; k <= mx; ++k) powers[v].push_back(ring.mul(powers[v].back(), vals[v]));
    }
    E acc = ring.zero();
    for (const auto& [e, c] : f.terms()) {
        E t = ring.from_int(c);
        for (std::size_t v = 0; v < vals.size(); ++v)
            if (e[v]) t = ring.mul(t, powers[v][e[v]]);
        acc = ring.add(acc, t);
    }
    return acc;
}

template <CoeffRing R>
class WittRing {
public:
    using Elem = typename R::Elem;
    using Vec = std::vector<Elem>;

    WittRing(R ring, std::uint32_t p, std::uint32_t n)
        : ring_(std::move(ring)), p_(p), n_(n), polys_(WittPolys::get(p, n)) {
        if (n == 0) throw std::invalid_argument("WittRing: length must be >= 1");
    }

    const R& coeffs() const { return ring_; }
    std::uint32_t p() const { return p_; }
    std::uint32_t length() const { return n_; }
    bool char_p() const { return ring_.characteristic() == BigInt(p_); }

    Vec zero() const { return Vec(n_, ring_.zero()); }
    Vec one() const { return teichmuller(ring_.one()); }
    Vec teichmuller(const Elem& x) const {
        Vec v = zero();
        v[0] = x;
        return v;
    }

    Vec add(const Vec& a, const Vec& b) const { return apply2(polys_->sum, a, b); }
    Vec mul(const Vec& a, const Vec& b) const { return apply2(polys_->product, a, b); }
    Vec neg(const Vec& a) const {
        check(a);
        Vec r;
        for (const auto& f : polys_->negation) r.push_back(evaluate(f, ring_, a));
        return r;
    }
    Vec sub(const Vec& a, const Vec& b) const { return add(a, neg(b)); }
    bool eq(const Vec& a, const Vec& b) const {
        check(a);
        check(b);
        for (std::uint32_t i = 0; i < n_; ++i)
            if (!ring_.eq(a[i], b[i])) return false;
        return true;
    }

    /// k * 1 in W_n.
    Vec from_int(std::int64_t k) const {
        Vec acc = zero(), base = one();
        bool negative = k < 0;
        std::uint64_t u = negative ? static_cast<std::uint64_t>(-k) : static_cast<std::uint64_t>(k);
        while (u) {
            if (u & 1) acc = add(acc, base);
            base = add(base, base);
            u >>= 1;
        }
        return negative ? neg(acc) : acc;
    }

    std::vector<Elem> ghost(const Vec& a) const {
        check(a);
        std::vector<Elem> w;
        for (std::uint32_t i = 0; i < n_; ++i) {
            Elem s = ring_.zero();
            BigInt pj = 1;
            for (std::uint32_t j = 0; j <= i; ++j) {
                Elem x = a[j];
                for (std::uint32_t r = 0; r < i - j; ++r) x = pth_power(x);
                s = ring_.add(s, ring_.mul(ring_.from_int(pj), x));
                pj *= p_;
            }
            w.push_back(s);
        }
        return w;
    }

    /// V: W_n -> W_n, dropping the last component.
    Vec verschiebung(const Vec& a) const {
        check(a);
        Vec r = zero();
        for (std::uint32_t i = 0; i + 1 < n_; ++i) r[i + 1] = a[i];
        return r;
    }
    /// V: W_n -> W_{n+1}.
    Vec verschiebung_extend(const Vec& a) const {
        check(a);
        Vec r(n_ + 1, ring_.zero());
        for (std::uint32_t i = 0; i < n_; ++i) r[i + 1] = a[i];
        return r;
    }

    /// F: W_{n+1} -> W_n through the universal polynomials; valid over every ring.
    Vec frobenius_truncating(const Vec& a_long) const {
        if (a_long.size() != n_ + 1) throw std::invalid_argument("frobenius_truncating: expects length n+1");
        Vec r;
        for (const auto& f : polys_->frobenius) r.push_back(evaluate(f, ring_, a_long));
        return r;
    }
    /// F on W_n over a characteristic-p ring, polynomial path: the last input only
    /// enters through p * x_n, so padding with 0 is exact.
    Vec frobenius_polynomial(const Vec& a) const {
        require_char_p();
        check(a);
        Vec pad = a;
        pad.push_back(ring_.zero());
        return frobenius_truncating(pad);
    }
    /// F on W_n over a characteristic-p ring, componentwise p-th power.
    Vec frobenius_componentwise(const Vec& a) const {
        require_char_p();
        check(a);
        Vec r;
        for (const auto& x : a) r.push_back(pth_power(x));
        return r;
    }
    Vec frobenius(const Vec& a) const { return frobenius_componentwise(a); }

    Elem pth_power(const Elem& x) const {
        Elem r = ring_.one();
        for (std::uint32_t i = 0; i < p_; ++i) r = ring_.mul(r, x);
        return r;
    }

    void check(const Vec& a) const {
        if (a.size() != n_)
            throw std::invalid_argument("WittRing: vector of length " + std::to_string(a.size()) + " in W_" +
                                        std::to_string(n_));
    }

private:
    void require_char_p() const {
        if (!char_p()) throw std::logic_error("WittRing: endomorphic Frobenius needs a characteristic-p ring");
    }
    Vec apply2(const std::vector<IntPoly>& fs, const Vec& a, const Vec& b) const {
        check(a);
        check(b);
        std::vector<Elem> vals = a;
        vals.insert(vals.end(), b.begin(), b.end());
        Vec r;
        r.reserve(n_);
        for (const auto& f : fs) r.push_back(evaluate(f, ring_, vals));
        return r;
    }

    R ring_;
    std::uint32_t p_;
    std::uint32_t n_;
    std::shared_ptr<const WittPolys> polys_;
};

/// Apply a coefficient-ring map componentwise (functoriality of W_n).
template <class Vec, class F>
auto map_components(const Vec& a, F f) {
    std::vector<decltype(f(a[0]))> r;
    for (const auto& x : a) r.push_back(f(x));
    return r;
}

}  // namespace pcris
