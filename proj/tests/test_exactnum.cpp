#include "pcris/exactnum.hpp"

#include <doctest.h>

#include <random>

using namespace pcris;

namespace {

// v_p(k!) by factoring every factor
std::uint64_t vp_factorial_naive(std::uint64_t k, std::uint32_t p) {
    std::uint64_t s = 0;
    for (std::uint64_t i = 2; i <= k; ++i)
        for (std::uint64_t j = i; j % p == 0; j /= p) ++s;
    return s;
}

}  // namespace

TEST_CASE("ring params reject bad input") {
    CHECK_THROWS_AS(RingParams(4, 2), std::invalid_argument);
    CHECK_THROWS_AS(RingParams(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(RingParams(2, 70), std::invalid_argument);
    CHECK(RingParams(3, 3).modulus() == 27);
}

TEST_CASE("valuations") {
    RingParams P(2, 3);
    CHECK(P.val(0) == 3);
    CHECK(P.val(4) == 2);
    CHECK(P.val(3) == 0);
    ResidueInt z(0, P);
    CHECK(z.valuation().is_zero);
    CHECK(z.valuation().value == 3);
    CHECK(ResidueInt(-1, P).value() == 7);
    CHECK(P.centered(7) == -1);
}

TEST_CASE("inverses agree with a search over all residues") {
    for (auto [p, n] : {std::pair{2u, 3u}, {3u, 2u}, {5u, 2u}}) {
        RingParams P(p, n);
        for (std::uint64_t a = 0; a < P.modulus(); ++a) {
            if (!P.is_unit(a)) {
                CHECK_THROWS(P.inv(a));
                continue;
            }
            std::uint64_t found = 0;
            for (std::uint64_t b = 0; b < P.modulus(); ++b)
                if (P.mul(a, b) == 1) found = b;
            CHECK(P.inv(a) == found);
        }
    }
}

TEST_CASE("vp_factorial matches factor counting") {
    for (std::uint32_t p : {2u, 3u, 5u, 7u})
        for (std::uint64_t k = 0; k < 200; ++k) CHECK(vp_factorial(k, p) == vp_factorial_naive(k, p));
    CHECK(vp_factorial(10, 2) == 8);
    CHECK(vp_factorial(25, 5) == 6);
}

TEST_CASE("nilpotency bound") {
    CHECK(nilpotency_bound(RingParams(2, 2)) == 4);
    CHECK(nilpotency_bound(RingParams(2, 3)) == 4);
    CHECK(nilpotency_bound(RingParams(3, 2)) == 6);
    CHECK(nilpotency_bound(RingParams(5, 2)) == 10);
    CHECK(nilpotency_bound(RingParams(2, 1)) == 2);
}

TEST_CASE("falling factorials and binomials") {
    RingParams P(3, 2);
    CHECK(falling_factorial_mod(5, 3, P).value() == 60 % 9);
    CHECK(falling_factorial_mod(-2, 3, P).value() == P.reduce(-24));
    CHECK(falling_factorial_mod(7, 0, P).value() == 1);
    CHECK(falling_factorial_mod(2, 4, P).value() == 0);
    // C(i+j, i) against a Pascal triangle over the integers
    std::vector<std::vector<unsigned long long>> pascal(40);
    for (std::size_t r = 0; r < 40; ++r) {
        pascal[r].assign(r + 1, 1);
        for (std::size_t k = 1; k < r; ++k) pascal[r][k] = pascal[r - 1][k - 1] + pascal[r - 1][k];
    }
    for (std::uint64_t i = 0; i < 20; ++i)
        for (std::uint64_t j = 0; j < 20; ++j) CHECK(binom_times_dp(i, j, P).value() == pascal[i + j][i] % 9);
}

TEST_CASE("padic exponents") {
    PadicExponent a(6, 2, 2);  // 6/4 = 3/2
    CHECK(a.numerator() == 3);
    CHECK(a.level() == 1);
    CHECK(a.vp() == -1);
    CHECK(a.str() == "3/2");
    CHECK(a.scaled(3) == 12);
    CHECK((a + PadicExponent(1, 1, 2)) == PadicExponent::integer(2, 2));
    CHECK((a - a).is_zero());
    CHECK(PadicExponent(1, 2, 3).str() == "1/3^2");
    CHECK(PadicExponent(-1, 1, 2) < PadicExponent::integer(0, 2));
    CHECK_THROWS(PadicExponent(1, 2, 2).scaled(1));
}

TEST_CASE("property: residue arithmetic is a commutative ring") {
    std::mt19937_64 gen(7);
    RingParams P(5, 3);
    for (int k = 0; k < 500; ++k) {
        ResidueInt a(static_cast<std::int64_t>(gen() % 1000) - 500, P), b(static_cast<std::int64_t>(gen() % 1000), P),
            c(static_cast<std::int64_t>(gen() % 1000), P);
        CHECK((a + b) * c == a * c + b * c);
        CHECK(a * b == b * a);
        CHECK(a - a == ResidueInt(0, P));
        if (a.is_unit()) CHECK(a * a.inverse() == ResidueInt(1, P));
    }
}
