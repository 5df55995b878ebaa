#include "pcris/exactnum.hpp"

#include <map>
#include <shared_mutex>
#include <utility>

namespace pcris {

bool is_prime(std::uint64_t v) {
    if (v < 2) return false;
    for (std::uint64_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

RingParams::RingParams(std::uint32_t p, std::uint32_t n) : p_(p), n_(n) {
    if (!is_prime(p)) throw std::invalid_argument("RingParams: p = " + std::to_string(p) + " is not prime");
    if (n < 1) throw std::invalid_argument("RingParams: n must be >= 1");
    unsigned __int128 m = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
        m *= p;
        if (m > (static_cast<unsigned __int128>(1) << 62))
            throw std::invalid_argument("RingParams: p^n exceeds 2^62");
    }
    mod_ = static_cast<std::uint64_t>(m);
}

std::uint64_t RingParams::reduce(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(mod_);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(mod_) : r);
}

std::uint64_t RingParams::pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = 1 % mod_;
    a %= mod_;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

std::uint32_t RingParams::val(std::uint64_t a) const {
    if (a % mod_ == 0) return n_;
    std::uint32_t v = 0;
    while (a % p_ == 0) {
        a /= p_;
        ++v;
    }
    return v;
}

std::uint64_t RingParams::inv(std::uint64_t a) const {
    a %= mod_;
    if (!is_unit(a)) throw std::domain_error("RingParams::inv: element is not a unit");
    // extended Euclid on signed 128-bit values
    __int128 t = 0, nt = 1, r = mod_, nr = a;
    while (nr != 0) {
        __int128 q = r / nr;
        __int128 tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (t < 0) t += mod_;
    return static_cast<std::uint64_t>(t);
}

std::uint64_t RingParams::ppow(std::uint32_t e) const {
    if (e >= n_) return 0;
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < e; ++i) r *= p_;
    return r;
}

std::int64_t RingParams::centered(std::uint64_t a) const {
    a %= mod_;
    if (a > mod_ / 2) return static_cast<std::int64_t>(a) - static_cast<std::int64_t>(mod_);
    return static_cast<std::int64_t>(a);
}

PadicExponent::PadicExponent(std::int64_t numerator, std::uint32_t level, std::uint32_t p)
    : num_(numerator), level_(level), p_(p) {
    if (num_ == 0) {
        level_ = 0;
        return;
    }
    while (level_ > 0 && num_ % static_cast<std::int64_t>(p_) == 0) {
        num_ /= static_cast<std::int64_t>(p_);
        --level_;
    }
}

std::int64_t PadicExponent::vp() const {
    if (num_ == 0) return 0;
    return static_cast<std::int64_t>(vp_int(num_, p_)) - static_cast<std::int64_t>(level_);
}

std::int64_t PadicExponent::scaled(std::uint32_t m) const {
    if (level_ > m) throw std::out_of_range("PadicExponent: level " + std::to_string(level_) + " exceeds " + std::to_string(m));
    std::int64_t f = 1;
    for (std::uint32_t i = level_; i < m; ++i) f *= p_;
    return num_ * f;
}

PadicExponent PadicExponent::operator+(const PadicExponent& o) const {
    std::uint32_t L = std::max(level_, o.level_);
    return PadicExponent(scaled(L) + o.scaled(L), L, p_);
}

PadicExponent PadicExponent::operator-(const PadicExponent& o) const { return *this + (-o); }

PadicExponent PadicExponent::times(std::int64_t k) const { return PadicExponent(num_ * k, level_, p_); }

bool PadicExponent::operator<(const PadicExponent& o) const {
    std::uint32_t L = std::max(level_, o.level_);
    return scaled(L) < o.scaled(L);
}

std::string PadicExponent::str() const {
    if (level_ == 0) return std::to_string(num_);
    std::string s = std::to_string(num_) + "/" + std::to_string(p_);
    if (level_ > 1) s += "^" + std::to_string(level_);
    return s;
}

std::uint64_t vp_int(std::int64_t v, std::uint32_t p) {
    if (v == 0) throw std::invalid_argument("vp_int: zero");
    std::uint64_t u = v < 0 ? static_cast<std::uint64_t>(-v) : static_cast<std::uint64_t>(v);
    std::uint64_t r = 0;
    while (u % p == 0) {
        u /= p;
        ++r;
    }
    return r;
}

std::uint64_t vp_factorial(std::uint64_t k, std::uint32_t p) {
    std::uint64_t s = 0;
    for (std::uint64_t q = k / p; q > 0; q /= p) s += q;
    return s;
}

std::uint32_t nilpotency_bound(const RingParams& params) {
    std::uint32_t k = 1;
    while (vp_factorial(k, params.p()) < params.n()) ++k;
    return k;
}

ResidueInt falling_factorial_mod(std::int64_t a, std::uint64_t k, const RingParams& params) {
    std::uint64_t r = 1 % params.modulus();
    for (std::uint64_t j = 0; j < k && r != 0; ++j)
        r = params.mul(r, params.reduce(a - static_cast<std::int64_t>(j)));
    return ResidueInt::from_raw(r, params);
}

ResidueInt binom_times_dp(std::uint64_t i, std::uint64_t j, const RingParams& params) {
    auto table = BinomTable::get(params);
    return ResidueInt::from_raw((*table)(i + j, i), params);
}

BinomTable::BinomTable(const RingParams& params) : params_(params), rows_(kMaxRows) {}

std::shared_ptr<BinomTable> BinomTable::get(const RingParams& params) {
    static std::shared_mutex mu;
    static std::map<std::pair<std::uint32_t, std::uint32_t>, std::shared_ptr<BinomTable>> cache;
    const auto key = std::make_pair(params.p(), params.n());
    {
        std::shared_lock lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    std::unique_lock lock(mu);
    auto& slot = cache[key];
    if (!slot) slot = std::make_shared<BinomTable>(params);
    return slot;
}

void BinomTable::grow(std::size_t n) {
    if (n >= kMaxRows) throw std::out_of_range("BinomTable: row " + std::to_string(n) + " beyond table capacity");
    std::lock_guard lock(mu_);
    std::size_t have = ready_.load(std::memory_order_relaxed);
    for (std::size_t r = have; r <= n; ++r) {
        auto row = std::make_unique<std::uint64_t[]>(r + 1);
        row[0] = row[r] = 1 % params_.modulus();
        for (std::size_t k = 1; k < r; ++k) row[k] = params_.add(rows_[r - 1][k - 1], rows_[r - 1][k]);
        rows_[r] = std::move(row);
    }
    if (n + 1 > have) ready_.store(n + 1, std::memory_order_release);
}

}  // namespace pcris
