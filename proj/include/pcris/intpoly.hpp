#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pcris {

using BigInt = boost::multiprecision::cpp_int;

/// Sparse multivariate polynomial over Z in a fixed number of variables.
class IntPoly {
public:
    using Exps = std::vector<std::uint32_t>;

    IntPoly() = default;
    explicit IntPoly(std::size_t nvars) : nvars_(nvars) {}
    static IntPoly constant(std::size_t nvars, const BigInt& c);
    static IntPoly variable(std::size_t nvars, std::size_t v);

    std::size_t nvars() const { return nvars_; }
    const std::map<Exps, BigInt>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::uint32_t max_exponent(std::size_t v) const;

    IntPoly operator+(const IntPoly& o) const;
    IntPoly operator-(const IntPoly& o) const;
    IntPoly operator*(const IntPoly& o) const;
    IntPoly scaled(const BigInt& c) const;
    IntPoly pow(std::uint64_t e) const;
    /// Exact division of every coefficient; throws if some coefficient is not divisible.
    IntPoly divided_exactly(const BigInt& d) const;
    bool operator==(const IntPoly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

    std::string str() const;

private:
    void add_term(const Exps& e, const BigInt& c);
    std::size_t nvars_ = 0;
    std::map<Exps, BigInt> terms_;
};

}  // namespace pcris
