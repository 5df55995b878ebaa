#pragma once

#include "pcris/dpring.hpp"
#include "pcris/lattice.hpp"

#include <json.hpp>

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace pcris {

struct PeriodModelDesc {
    RingParams params{2, 2};
    std::uint32_t m = 1;
    std::uint32_t d = 2;
    std::uint32_t r = 2;
    CMode c = CMode::pi;
    std::uint32_t D_z = 4;
    std::uint32_t D_x = 3;
    std::int64_t N = 4;

    /// d=2, r=2, D_z = 2p^m, D_x = 3, N = 2p.
    static PeriodModelDesc defaults(std::uint32_t p, std::uint32_t n, std::uint32_t m = 1);
    void validate() const;  // throws PreconditionError
    LatticeShape shape() const;
    nlohmann::json to_json() const;
};

enum class Chart { X, Y };

/// Fixed variable layout of every model ring: Z, Xi, then (module rings only) the
/// log variable and one variable per direction 2..d+1.
namespace var {
constexpr std::size_t Z = 0;
constexpr std::size_t Xi = 1;
constexpr std::size_t U = 2;  // X or Y, attached to pi and u
inline std::size_t dir(std::size_t i) { return i + 1; }  // direction i in 2..d+1
}  // namespace var

/// Distinguished base elements, in whatever model ring they were built for.
struct BaseElems {
    DPPoly one;
    DPPoly qm;    // 1 - Z
    DPPoly q;     // (1 - Z)^{p^m}
    DPPoly qinv;  // q^{-1}
    DPPoly tau;   // log(1 - Z)
    DPPoly t;     // p^m tau
    DPPoly xi;
    DPPoly wp;  // p + Xi
};

class PeriodModel {
public:
    explicit PeriodModel(PeriodModelDesc desc);

    const PeriodModelDesc& desc() const { return desc_; }
    const LatticeShape& shape() const { return shape_; }
    const RingParams& params() const { return desc_.params; }

    const DPRing& base_ring() const { return base_; }
    const DPRing& module_ring(Chart c = Chart::X) const { return c == Chart::X ? module_x_ : module_y_; }
    /// Same variables with the Z-degree capped (and optionally all module variables capped).
    DPRing z_capped(const DPRing& ring, std::uint32_t cap_z, std::optional<std::uint32_t> cap_x = {}) const;
    Chart chart_of(const DPRing& ring) const;
    /// Human-readable dictionary for the module variables.
    std::vector<std::string> dictionary() const;

    const BaseElems& base(const DPRing& ring) const;
    /// (1 - Z)^{p^m alpha}; level(alpha) <= m.
    DPPoly q_power(const PadicExponent& alpha, const DPRing& ring) const;
    /// Same value via the direct falling-factorial series (used as a cross-check).
    DPPoly q_power_series(const PadicExponent& alpha, const DPRing& ring) const;
    /// u_alpha with q^alpha - 1 = alpha t u_alpha.
    DPPoly u_alpha(std::int64_t alpha, const DPRing& ring) const;
    DPPoly u_alpha_inverse(std::int64_t alpha, const DPRing& ring) const;
    /// h_s = u_{-1}^s (p^{m(s-1)}/s) tau^[s-1], so that gamma_s(1 - q^{-1}) = t h_s (s >= 1).
    DPPoly h(std::uint32_t s, const DPRing& ring) const;

    struct FractionalCofactor {
        DPPoly value;      // in the requested ring
        bool exact_in_w;   // the auxiliary division was exact before truncation
        std::uint32_t cap;
    };
    /// c with (q^gamma - 1) c = t modulo Z-degree > cap, for v_p(gamma) < 0. The ring must cap Z.
    const FractionalCofactor& fractional_cofactor(const PadicExponent& gamma, const DPRing& ring) const;

    /// Cached DP substitution keyed by a caller-chosen name.
    const DPSubstitution& substitution(const std::string& key,
                                       const std::function<std::unique_ptr<DPSubstitution>()>& make) const;

private:
    PeriodModelDesc desc_;
    LatticeShape shape_;
    DPRing base_, module_x_, module_y_;
    mutable std::mutex mu_;
    mutable std::map<std::string, std::unique_ptr<BaseElems>> base_cache_;
    mutable std::map<std::string, DPPoly> poly_cache_;
    mutable std::map<std::string, std::unique_ptr<FractionalCofactor>> cofactor_cache_;
    mutable std::map<std::string, std::unique_ptr<DPSubstitution>> subst_cache_;
    bool cached(const std::string& key, DPPoly& out) const;
    const DPPoly& store(const std::string& key, DPPoly value) const;
};

/// Finite sum of lattice monomials [T]^e with DP-polynomial coefficients.
class PeriodElem {
public:
    PeriodElem() = default;
    PeriodElem(LatticeShape shape, DPRing ring) : shape_(shape), ring_(std::move(ring)) {}
    static PeriodElem monomial(const LatticeShape& shape, const ExponentVec& e, const DPPoly& coeff);
    static PeriodElem scalar(const LatticeShape& shape, const DPPoly& coeff);

    const LatticeShape& shape() const { return shape_; }
    const DPRing& ring() const { return ring_; }
    const std::map<ExponentVec, DPPoly>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    DPPoly coeff(const ExponentVec& e) const;
    /// Adds coeff * [T]^e; e is normalized and range-checked first.
    void add_term(const ExponentVec& e, const DPPoly& coeff);

    PeriodElem operator+(const PeriodElem& o) const;
    PeriodElem operator-(const PeriodElem& o) const;
    PeriodElem operator-() const;
    PeriodElem operator*(const PeriodElem& o) const;
    PeriodElem scaled(const DPPoly& c) const;
    PeriodElem times_exponent(const ExponentVec& e) const;
    PeriodElem map_coeffs(const std::function<DPPoly(const ExponentVec&, const DPPoly&)>& f) const;
    PeriodElem in_ring(const DPRing& ring) const;
    bool operator==(const PeriodElem& o) const;
    bool operator!=(const PeriodElem& o) const { return !(*this == o); }

    std::string str() const;

private:
    LatticeShape shape_;
    DPRing ring_;
    std::map<ExponentVec, DPPoly> terms_;
};

/// (1 + V)^a as a DP polynomial in variable v (any integer a; terminates mod p^n).
DPPoly binomial_power(const DPRing& ring, std::size_t v, std::int64_t a);

/// Components by sigma_i-eigen-exponent alpha (the character of direction i).
std::map<PadicExponent, PeriodElem> decompose_eigen(const PeriodElem& x, std::size_t i);

/// Ring endomorphism Z -> 1-(1-Z)^p, Xi -> (p+Xi)^p - p, module variables V -> (1+V)^p - 1.
DPPoly frobenius_phi(const PeriodModel& model, const DPPoly& x);
/// Also multiplies exponents by p; throws ExponentOverflow past N.
PeriodElem frobenius_phi(const PeriodModel& model, const PeriodElem& x);

/// Normal form sum_k x_k Xi^[k], x_k combinations of lattice monomials.
nlohmann::json serialize(const PeriodElem& x);
PeriodElem deserialize(const LatticeShape& shape, const DPRing& ring, const nlohmann::json& j);

/// One verified claim in a report.
struct CheckEntry {
    std::string claim_id;
    std::string anchor;
    nlohmann::json parameters = nlohmann::json::object();
    nlohmann::json witness = nullptr;
    std::string mode = "exact";  // exact | cap-truncated | quotient-level
    bool ok = false;
    std::string detail;

    static CheckEntry make(std::string id, std::string anchor, nlohmann::json params) {
        CheckEntry e;
        e.claim_id = std::move(id);
        e.anchor = std::move(anchor);
        e.parameters = std::move(params);
        return e;
    }
    nlohmann::json to_json() const;
};

struct ConstantsOptions {
    std::int64_t alpha_int_max = -1;   // default 2p^2
    std::int64_t frac_numerator_max = -1;  // default p^2
    std::uint32_t cap = 0;             // default 4p^m
    bool include_integer_iii = true;
};

/// Checks the three divisibility statements about t, q^alpha - 1 and their cofactors.
std::vector<CheckEntry> verify_constants(const PeriodModel& model, ConstantsOptions opt = {});

}  // namespace pcris
