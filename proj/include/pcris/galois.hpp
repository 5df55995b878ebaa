#pragma once

#include "pcris/linalg.hpp"
#include "pcris/periods.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pcris {

// ---- the action of sigma_i (directions i = 2..d+1) ----

/// sigma_i on coefficients: X_i -> q(1+X_i) - 1, or Y_i -> q^{-1}(1+Y_i) - 1 in the Y chart.
DPPoly sigma_coeff(const PeriodModel& model, const DPPoly& c, std::size_t i, bool inverse = false);
/// Lattice monomials pick up q^beta with beta the direction-i character.
PeriodElem sigma(const PeriodModel& model, const PeriodElem& x, std::size_t i);
PeriodElem sigma_inverse(const PeriodModel& model, const PeriodElem& x, std::size_t i);
PeriodElem sigma_minus_one(const PeriodModel& model, const PeriodElem& x, std::size_t i);
/// Rewrite between X_j and Y_j = (1+X_j)^{-1} - 1 (also for the log variable).
PeriodElem to_chart(const PeriodModel& model, const PeriodElem& x, Chart target);

// ---- derivations and their one-sided inverses ----

enum class CalculusVariant {
    vanishing,    // -(1+X_i) d/dX_i in the X chart
    invariants2,  // [T_1] d/dY_i in the Y chart (2 <= i <= r)
    torus,        // [T_i]^{-1} d/dY_i in the Y chart (i > r)
};
std::string to_string(CalculusVariant v);

PeriodElem derive(const PeriodModel& model, const PeriodElem& x, std::size_t i, CalculusVariant v);
/// Throws PreconditionError on domain violations (a missing [T_1] factor for invariants2).
PeriodElem integrate(const PeriodModel& model, const PeriodElem& x, std::size_t i, CalculusVariant v);
/// Number of terms the vanishing-variant integral of X^[j] needs before its coefficients vanish.
std::uint32_t integral_length(const RingParams& params, std::uint32_t j);

// ---- t-primitives ----

struct PrimitiveResult {
    PeriodElem f;
    std::string mode;  // exact | cap-truncated
};

/// f with (sigma_i - 1) f = t mu, built by recursion on the X_i-degree and checked before returning.
/// Characters with v_p < 0 are handled in the Z-capped ring (cap_z; 0 means the model's D_z).
PrimitiveResult t_primitive(const PeriodModel& model, const PeriodElem& mu, std::size_t i, std::uint32_t cap_z = 0);

// ---- identities, connection, Kummer ----

std::vector<CheckEntry> integration_identities(const PeriodModel& model, std::size_t i, std::uint32_t n_max);

/// Components along dlog T_2, ..., dlog T_{d+1}, du/u (X chart).
std::vector<PeriodElem> nabla(const PeriodModel& model, const PeriodElem& x);

std::vector<CheckEntry> kummer_check(const PeriodModel& model, std::size_t i);

// ---- truncated modules and Koszul cohomology ----

/// One isotypic block: basis Z^[a] * prod_j X_j^[k_j] (a <= D_z quotient, k_j <= D_x submodule),
/// twisted by a lattice character.
struct ModuleBlock {
    std::vector<std::int64_t> character;  // numerators over p^m, directions 2..d+1
    std::uint64_t multiplicity = 0;       // lattice monomials sharing this character
    ExponentVec representative;
    std::uint32_t D_z = 0, D_x = 0;
    std::vector<ModMatrix> sigma_minus_one;  // one per direction
    ModMatrix t_mult;

    std::size_t dim() const { return t_mult.rows(); }
    std::size_t index(std::uint32_t a, const std::vector<std::uint32_t>& k) const;
    std::uint32_t z_degree(std::size_t idx) const { return static_cast<std::uint32_t>(idx % (D_z + 1)); }
    /// "z=.., k=(..)" label.
    std::string label(std::size_t idx) const;
};

class TruncatedModule {
public:
    TruncatedModule(const PeriodModel& model, std::uint32_t D_z, std::uint32_t D_x);

    const PeriodModel& model() const { return *model_; }
    std::uint32_t D_z() const { return D_z_; }
    std::uint32_t D_x() const { return D_x_; }
    const std::vector<ModuleBlock>& blocks() const { return blocks_; }
    std::uint64_t total_dim() const;
    /// Builds (and does not store) a block for an arbitrary character.
    ModuleBlock make_block(const std::vector<std::int64_t>& character, std::uint32_t D_z, std::uint32_t D_x) const;
    /// Operators in "row col value" form, one section per block and operator.
    std::string export_text() const;

private:
    const PeriodModel* model_;
    std::uint32_t D_z_, D_x_;
    std::vector<ModuleBlock> blocks_;
};

/// Koszul differentials d^j : C^j -> C^{j+1}, C^j = M^(d choose j).
struct KoszulComplex {
    std::vector<ModMatrix> d;                    // d[0..ops-1]
    std::vector<std::vector<unsigned>> subsets;  // all subsets, grouped by size, lexicographic
    std::vector<std::size_t> offsets;            // first subset of each size
    std::size_t module_dim = 0;

    std::size_t rank(std::size_t j) const;  // number of summands in C^j
    std::size_t dim(std::size_t j) const { return rank(j) * module_dim; }
};

KoszulComplex koszul(const std::vector<ModMatrix>& ops, const RingParams& params);
bool koszul_square_zero(const KoszulComplex& k);

struct Cohomology {
    std::vector<std::vector<std::uint32_t>> divisors;  // per degree; summand Z/p^g
    std::vector<ModVec> h0_basis;
    std::uint64_t log_size(std::size_t j) const;
};

Cohomology koszul_cohomology(const KoszulComplex& k, const RingParams& params);

std::vector<CheckEntry> h0_invariants(const TruncatedModule& m, std::size_t i);

struct AnnihilationOptions {
    std::uint32_t retry_raise = 2;  // doubled until max_raise
    std::uint32_t max_raise = 8;
    bool cross_check_primitives = true;  // d = 1 only
};

std::vector<CheckEntry> t_annihilation_suite(const TruncatedModule& m, AnnihilationOptions opt = {});

}  // namespace pcris
