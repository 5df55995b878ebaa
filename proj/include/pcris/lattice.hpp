#pragma once

#include "pcris/errors.hpp"
#include "pcris/exactnum.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace pcris {

enum class ChartKind { free_nonneg, free_group, padic_nonneg, padic_group };

std::string to_string(ChartKind k);

/// N^r, Z^r, N[1/p]^r or Z[1/p]^r, with p-adic denominators bounded by p^level.
struct MonoidChart {
    ChartKind kind = ChartKind::free_nonneg;
    std::uint32_t rank = 1;
    std::uint32_t level = 0;
    std::uint32_t p = 2;

    bool padic() const { return kind == ChartKind::padic_nonneg || kind == ChartKind::padic_group; }
    bool group() const { return kind == ChartKind::free_group || kind == ChartKind::padic_group; }
    bool contains(const std::vector<PadicExponent>& x) const;
    std::string str() const;
};

/// Perfection: free charts become p-adic; the level bound is raised by `levels`.
MonoidChart perfection(const MonoidChart& c, std::uint32_t levels = 1);
/// x -> p*x; throws if x is not in the chart.
std::vector<PadicExponent> frobenius_monoid(const MonoidChart& c, const std::vector<PadicExponent>& x);
/// Whether every element of level <= level-1 is p times an element of the chart.
bool frobenius_surjective_onto_lower_level(const MonoidChart& c);

/// Basis of ker(domain^gp -> target^gp). structure_map has target.rank rows and one
/// column per domain generator. Basis vectors are oriented so the first nonzero entry in
/// block `orient_block` (default: the last block) is positive.
std::vector<std::vector<PadicExponent>> kernel_L(const std::vector<MonoidChart>& domain, const MonoidChart& target,
                                                 const std::vector<std::vector<std::int64_t>>& structure_map,
                                                 std::size_t orient_block = std::numeric_limits<std::size_t>::max());

enum class CMode { one, pi };
std::string to_string(CMode c);
CMode parse_cmode(const std::string& s);

/// Exponent coordinates for T_1, ..., T_{d+1} and pi, as numerators over p^m.
struct LatticeShape {
    std::uint32_t p = 2, m = 1, d = 1, r = 1;
    CMode c = CMode::pi;
    std::int64_t N = 4;  // |numerator| bound per coordinate

    std::size_t size() const { return d + 2; }
    std::size_t pi_index() const { return d + 1; }
    std::int64_t denom() const;
};

struct ExponentVec {
    std::vector<std::int64_t> num;  // numerators over p^m

    bool operator==(const ExponentVec& o) const { return num == o.num; }
    bool operator<(const ExponentVec& o) const { return num < o.num; }
    bool is_zero() const;
};

ExponentVec zero_exponent(const LatticeShape& s);
/// Unit exponent 1 in coordinate `coord` (0-based: 0 is T_1, d+1 is pi).
ExponentVec unit_exponent(const LatticeShape& s, std::size_t coord, std::int64_t numerator_over_pm);
ExponentVec from_padic(const LatticeShape& s, const std::vector<PadicExponent>& coords);
std::vector<PadicExponent> to_padic(const LatticeShape& s, const ExponentVec& e);
std::string exponent_str(const LatticeShape& s, const ExponentVec& e);

/// Subtract mu*(1,...,1,0,...,0,-1) with mu the minimum of the first r coordinates (c = pi); identity for c = 1.
ExponentVec normalize_semistable(const LatticeShape& s, const ExponentVec& e);
/// Sector constraints (first r coordinates and pi nonnegative) and the numerator bound.
bool in_sector(const LatticeShape& s, const ExponentVec& e);
/// Normalized sum; throws ExponentOverflow past N and PreconditionError outside the sector.
ExponentVec add_exponents(const LatticeShape& s, const ExponentVec& a, const ExponentVec& b);
void check_exponent(const LatticeShape& s, const ExponentVec& e);

/// Eigen-character of direction i (2..d+1): e_i - e_1 when i <= r, e_i otherwise.
PadicExponent character(const LatticeShape& s, const ExponentVec& e, std::size_t i);
/// All characters (directions 2..d+1).
std::vector<std::int64_t> character_vector(const LatticeShape& s, const ExponentVec& e);

/// Every normalized exponent vector in the sector with |numerators| <= N.
std::vector<ExponentVec> enumerate_exponents(const LatticeShape& s);

}  // namespace pcris
