#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcris {

bool is_prime(std::uint64_t v);

/// The coefficient ring Z/p^n. Construction rejects non-primes and moduli
/// that do not fit comfortably in 62 bits.
class RingParams {
public:
    RingParams() = default;
    RingParams(std::uint32_t p, std::uint32_t n);

    std::uint32_t p() const { return p_; }
    std::uint32_t n() const { return n_; }
    std::uint64_t modulus() const { return mod_; }

    std::uint64_t reduce(std::int64_t v) const;
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t s = a + b;
        return s >= mod_ ? s - mod_ : s;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + mod_ - b; }
    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : mod_ - a; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % mod_);
    }
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;

    /// p-adic valuation of a residue; 0 reports n.
    std::uint32_t val(std::uint64_t a) const;
    bool is_unit(std::uint64_t a) const { return a % p_ != 0; }
    /// Inverse of a unit; throws std::domain_error otherwise.
    std::uint64_t inv(std::uint64_t a) const;
    /// p^e reduced (0 once e >= n).
    std::uint64_t ppow(std::uint32_t e) const;
    /// Signed representative in (-p^n/2, p^n/2].
    std::int64_t centered(std::uint64_t a) const;

    bool operator==(const RingParams& o) const { return p_ == o.p_ && n_ == o.n_; }
    bool operator!=(const RingParams& o) const { return !(*this == o); }

private:
    std::uint32_t p_ = 2;
    std::uint32_t n_ = 1;
    std::uint64_t mod_ = 2;
};

struct Valuation {
    std::uint32_t value;  // n when the element is zero
    bool is_zero;
};

class ResidueInt {
public:
    ResidueInt() = default;
    ResidueInt(std::int64_t v, const RingParams& params) : v_(params.reduce(v)), params_(params) {}
    static ResidueInt from_raw(std::uint64_t v, const RingParams& params) {
        ResidueInt r;
        r.v_ = v % params.modulus();
        r.params_ = params;
        return r;
    }

    std::uint64_t value() const { return v_; }
    const RingParams& params() const { return params_; }

    ResidueInt operator+(const ResidueInt& o) const { check(o); return from_raw(params_.add(v_, o.v_), params_); }
    ResidueInt operator-(const ResidueInt& o) const { check(o); return from_raw(params_.sub(v_, o.v_), params_); }
    ResidueInt operator*(const ResidueInt& o) const { check(o); return from_raw(params_.mul(v_, o.v_), params_); }
    ResidueInt operator-() const { return from_raw(params_.neg(v_), params_); }
    ResidueInt& operator+=(const ResidueInt& o) { return *this = *this + o; }
    ResidueInt& operator-=(const ResidueInt& o) { return *this = *this - o; }
    ResidueInt& operator*=(const ResidueInt& o) { return *this = *this * o; }
    bool operator==(const ResidueInt& o) const { return v_ == o.v_ && params_ == o.params_; }
    bool operator!=(const ResidueInt& o) const { return !(*this == o); }

    Valuation valuation() const { return {params_.val(v_), v_ == 0}; }
    bool is_unit() const { return params_.is_unit(v_); }
    ResidueInt inverse() const { return from_raw(params_.inv(v_), params_); }
    ResidueInt pow(std::uint64_t e) const { return from_raw(params_.pow(v_, e), params_); }

private:
    void check(const ResidueInt& o) const {
        if (params_ != o.params_) throw std::invalid_argument("ResidueInt: mismatched rings");
    }
    std::uint64_t v_ = 0;
    RingParams params_;
};

/// numerator / p^level in lowest terms.
class PadicExponent {
public:
    PadicExponent() = default;
    PadicExponent(std::int64_t numerator, std::uint32_t level, std::uint32_t p);
    static PadicExponent integer(std::int64_t v, std::uint32_t p) { return PadicExponent(v, 0, p); }

    std::int64_t numerator() const { return num_; }
    std::uint32_t level() const { return level_; }
    std::uint32_t prime() const { return p_; }
    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return level_ == 0; }
    /// v_p(numerator) - level; 0 is reported with is_zero set.
    std::int64_t vp() const;
    /// Numerator when written over p^m (requires level <= m).
    std::int64_t scaled(std::uint32_t m) const;

    PadicExponent operator+(const PadicExponent& o) const;
    PadicExponent operator-(const PadicExponent& o) const;
    PadicExponent operator-() const { return PadicExponent(-num_, level_, p_); }
    PadicExponent times(std::int64_t k) const;

    bool operator==(const PadicExponent& o) const { return num_ == o.num_ && level_ == o.level_; }
    bool operator!=(const PadicExponent& o) const { return !(*this == o); }
    bool operator<(const PadicExponent& o) const;
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    std::string str() const;

private:
    std::int64_t num_ = 0;
    std::uint32_t level_ = 0;
    std::uint32_t p_ = 2;
};

std::uint64_t vp_int(std::int64_t v, std::uint32_t p);  // v != 0
std::uint64_t vp_factorial(std::uint64_t k, std::uint32_t p);
/// Smallest k with v_p(k!) >= n: every divided-power ideal element z has z^k = 0 mod p^n.
std::uint32_t nilpotency_bound(const RingParams& params);

ResidueInt falling_factorial_mod(std::int64_t a, std::uint64_t k, const RingParams& params);
ResidueInt binom_times_dp(std::uint64_t i, std::uint64_t j, const RingParams& params);

/// Pascal table mod p^n. Rows are appended under a lock; readers of rows that
/// already exist never lock.
class BinomTable {
public:
    static constexpr std::size_t kMaxRows = 1 << 13;

    explicit BinomTable(const RingParams& params);
    static std::shared_ptr<BinomTable> get(const RingParams& params);

    std::uint64_t operator()(std::size_t n, std::size_t k) {
        if (k > n) return 0;
        if (n >= ready_.load(std::memory_order_acquire)) grow(n);
        return rows_[n][k];
    }
    void ensure(std::size_t n) {
        if (n >= ready_.load(std::memory_order_acquire)) grow(n);
    }
    const std::uint64_t* row(std::size_t n) {
        ensure(n);
        return rows_[n].get();
    }

private:
    void grow(std::size_t n);
    RingParams params_;
    std::vector<std::unique_ptr<std::uint64_t[]>> rows_;
    std::atomic<std::size_t> ready_{0};
    std::mutex mu_;
};

}  // namespace pcris
