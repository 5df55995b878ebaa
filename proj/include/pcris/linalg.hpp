#pragma once

#include "pcris/exactnum.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pcris {

using ModVec = std::vector<std::uint64_t>;

/// Dense matrix over Z/p^n, row-major.
class ModMatrix {
public:
    ModMatrix() = default;
    ModMatrix(std::size_t rows, std::size_t cols, const RingParams& params)
        : rows_(rows), cols_(cols), params_(params), a_(rows * cols, 0) {}
    static ModMatrix identity(std::size_t n, const RingParams& params);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const RingParams& params() const { return params_; }

    std::uint64_t& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    std::uint64_t operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    ModMatrix operator*(const ModMatrix& o) const;
    ModMatrix operator+(const ModMatrix& o) const;
    ModMatrix operator-(const ModMatrix& o) const;
    ModMatrix scaled(std::uint64_t c) const;
    ModVec apply(const ModVec& x) const;
    ModMatrix transpose() const;
    bool is_zero() const;
    bool operator==(const ModMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && params_ == o.params_ && a_ == o.a_;
    }

    void set_column(std::size_t j, const ModVec& v);
    ModVec column(std::size_t j) const;
    /// Block placement: copy `b` with its (0,0) at (r0,c0), adding `sign` times it.
    void add_block(std::size_t r0, std::size_t c0, const ModMatrix& b, bool negate = false);

    /// "row col value" lines for nonzero entries, 0-based.
    std::string coordinate_text() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    RingParams params_;
    std::vector<std::uint64_t> a_;
};

/// U * A * V = diag(p^e_1, ..., p^e_k, 0, ...), e ascending.
struct SmithForm {
    RingParams params;
    std::size_t rows = 0, cols = 0;
    std::vector<std::uint32_t> exponents;  // one per nonzero pivot, ascending
    bool has_transforms = false;
    ModMatrix U, V, Vinv;

    std::size_t rank() const { return exponents.size(); }
    /// Diagonal as residues (length min(rows, cols)).
    ModVec diagonal() const;
    /// log_p of |ker A| and |im A|.
    std::uint64_t log_kernel_size() const;
    std::uint64_t log_image_size() const;
};

SmithForm snf_local(const ModMatrix& a, bool with_transforms = true);

/// Generators of ker A as columns (V p^{n-e_i} e_i, and V e_i beyond the rank).
std::vector<ModVec> kernel_generators(const SmithForm& s);

/// Some x with A x = b, or nullopt. Canonical: minimal representatives and free coordinates 0.
std::optional<ModVec> solve_linear(const SmithForm& s, const ModVec& b);

/// Elementary divisors of ker(next) / im(prev), given as exponents g (summand Z/p^g, g = n for free).
/// prev: C^{j-1} -> C^j, next: C^j -> C^{j+1}; either may have zero rows/cols.
std::vector<std::uint32_t> homology_divisors(const ModMatrix& prev, const ModMatrix& next);

}  // namespace pcris
