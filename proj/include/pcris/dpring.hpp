#pragma once

#include "pcris/errors.hpp"
#include "pcris/exactnum.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pcris {

constexpr std::size_t kMaxDPVars = 8;
using Mono = std::array<std::uint16_t, kMaxDPVars>;

inline std::uint32_t mono_degree(const Mono& m) {
    std::uint32_t s = 0;
    for (auto k : m) s += k;
    return s;
}

/// Z/p^n<V_1, ..., V_v>, optionally divided by the ideal of monomials that exceed
/// a per-variable degree cap or a total-degree cap.
class DPRingDesc {
public:
    using Caps = std::vector<std::optional<std::uint32_t>>;

    DPRingDesc(const RingParams& params, std::vector<std::string> vars, Caps caps,
               std::optional<std::uint32_t> total_cap);
    static std::shared_ptr<const DPRingDesc> make(const RingParams& params, std::vector<std::string> vars,
                                                  Caps caps = {}, std::optional<std::uint32_t> total_cap = {});

    const RingParams& params() const { return params_; }
    std::size_t nvars() const { return vars_.size(); }
    const std::vector<std::string>& vars() const { return vars_; }
    const std::string& var(std::size_t i) const { return vars_.at(i); }
    std::optional<std::uint32_t> cap(std::size_t i) const { return caps_.at(i); }
    const Caps& caps() const { return caps_; }
    std::optional<std::uint32_t> total_cap() const { return total_cap_; }
    bool truncated() const;
    /// Index of a variable name, or -1.
    int index_of(const std::string& name) const;

    bool admits(const Mono& m) const {
        std::uint32_t deg = 0;
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (caps_[i] && m[i] > *caps_[i]) return false;
            deg += m[i];
        }
        return !total_cap_ || deg <= *total_cap_;
    }
    bool same_as(const DPRingDesc& o) const {
        return params_ == o.params_ && vars_ == o.vars_ && caps_ == o.caps_ && total_cap_ == o.total_cap_;
    }
    /// Same variables, different quotient.
    std::shared_ptr<const DPRingDesc> with_caps(Caps caps, std::optional<std::uint32_t> total_cap) const;
    std::shared_ptr<const DPRingDesc> untruncated() const { return with_caps({}, std::nullopt); }

    std::string describe() const;
    BinomTable& binom() const { return *binom_; }

private:
    RingParams params_;
    std::shared_ptr<BinomTable> binom_;
    std::vector<std::string> vars_;
    Caps caps_;
    std::optional<std::uint32_t> total_cap_;
};

using DPRing = std::shared_ptr<const DPRingDesc>;

/// Element of a DP polynomial ring: sparse, sorted by (total degree, multi-index).
class DPPoly {
public:
    using Term = std::pair<Mono, std::uint64_t>;

    DPPoly() = default;
    explicit DPPoly(DPRing ring) : ring_(std::move(ring)) {}
    static DPPoly constant(const DPRing& ring, std::int64_t c);
    static DPPoly constant_raw(const DPRing& ring, std::uint64_t c);
    static DPPoly variable(const DPRing& ring, std::size_t v);
    static DPPoly variable(const DPRing& ring, const std::string& name);
    static DPPoly monomial(const DPRing& ring, const Mono& m, std::uint64_t c = 1);
    /// Combines duplicates, reduces, drops zeros and monomials outside the quotient.
    static DPPoly from_terms(const DPRing& ring, std::vector<Term> terms);

    const DPRing& ring() const { return ring_; }
    const RingParams& params() const { return ring_->params(); }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    std::uint64_t constant_term() const;
    std::uint64_t coeff(const Mono& m) const;
    std::uint32_t min_degree() const;  // throws on zero
    std::uint32_t max_degree() const;  // 0 on zero
    std::uint32_t max_degree_in(std::size_t v) const;
    bool in_ideal() const { return constant_term() == 0; }
    /// Every coefficient divisible by p^e.
    bool divisible_by_ppow(std::uint32_t e) const;
    /// Coefficientwise exact division by p^e (throws if not divisible); result is determined mod p^{n-e}, lifted minimally.
    DPPoly divided_by_ppow(std::uint32_t e) const;

    DPPoly operator+(const DPPoly& o) const;
    DPPoly operator-(const DPPoly& o) const;
    DPPoly operator-() const;
    DPPoly operator*(const DPPoly& o) const;
    DPPoly& operator+=(const DPPoly& o) { return *this = *this + o; }
    DPPoly& operator-=(const DPPoly& o) { return *this = *this - o; }
    DPPoly& operator*=(const DPPoly& o) { return *this = *this * o; }
    DPPoly scaled(std::uint64_t c) const;
    DPPoly scaled_signed(std::int64_t c) const { return scaled(params().reduce(c)); }
    DPPoly times_monomial(const Mono& m, std::uint64_t c) const;
    DPPoly pow(std::uint64_t e) const;
    bool operator==(const DPPoly& o) const;
    bool operator!=(const DPPoly& o) const { return !(*this == o); }

    /// Re-home into a ring with the same variables (different quotient).
    DPPoly in_ring(const DPRing& other) const;
    /// Keep only terms satisfying pred.
    DPPoly filtered(const std::function<bool(const Mono&)>& pred) const;

    /// "c·V^[k1,k2,...]" terms joined by " + "; "0" for zero.
    std::string str() const;
    /// Human-oriented rendering with variable names, e.g. "3*Z^[2]*X^[1]".
    std::string pretty() const;

private:
    void check_same(const DPPoly& o) const;
    DPRing ring_;
    std::vector<Term> terms_;
};

/// gamma_q(x). x must lie in the DP ideal, except that with allow_p_constant a
/// constant term divisible by p is accepted (gamma_k(c) = c^k/k! is integral there).
DPPoly dp_power(const DPPoly& x, std::uint32_t q, bool allow_p_constant = false);
/// gamma_0(x), ..., gamma_q(x).
std::vector<DPPoly> dp_powers(const DPPoly& x, std::uint32_t q, bool allow_p_constant = false);

/// gamma_k(c) for an integer c divisible by p, mod p^n.
std::uint64_t dp_power_of_constant(std::int64_t c, std::uint32_t k, const RingParams& params);

DPPoly exp_ideal(const DPPoly& x);
DPPoly log_unit(const DPPoly& u);
DPPoly invert_unit(const DPPoly& u);

struct DivisionResult {
    DPPoly quotient;
    bool exact = false;
    bool triangular = false;  // solved stage by stage rather than by a global solve
};

/// q with den*q = num modulo total degree > cap.
DivisionResult divide_filtered(const DPPoly& num, const DPPoly& den, std::uint32_t cap);

/// Image in the quotient by total degree > D.
DPPoly truncate(const DPPoly& x, std::uint32_t D);

/// d/dV on DP monomials: V^[k] -> V^[k-1].
DPPoly dp_derivative(const DPPoly& x, std::size_t v);
/// V^[k] -> V^[k+1].
DPPoly dp_antiderivative(const DPPoly& x, std::size_t v);

/// The DP homomorphism V_i -> images[i] from source into target (images in the DP ideal,
/// or with p-divisible constants when allow_p_constant). gamma-powers are cached.
class DPSubstitution {
public:
    DPSubstitution(DPRing source, DPRing target, std::vector<DPPoly> images, bool allow_p_constant = false);
    DPPoly operator()(const DPPoly& x) const;
    const DPRing& target() const { return target_; }

private:
    const DPPoly& gamma(std::size_t v, std::uint32_t k) const;
    DPRing source_, target_;
    std::vector<DPPoly> images_;
    bool allow_p_constant_;
    mutable std::mutex mu_;
    mutable std::vector<std::vector<DPPoly>> cache_;
};

/// Parse the canonical rendering back (used for report round-trips).
DPPoly parse_dp(const DPRing& ring, const std::string& text);

}  // namespace pcris
