#include "pcris/dpring.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <doctest.h>

#include <map>
#include <random>

using namespace pcris;
using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

namespace {

// Ordinary polynomials over Q in two variables; V^[k] is V^k / k!.
using QPoly = std::map<std::pair<unsigned, unsigned>, cpp_rational>;

cpp_int fact(unsigned k) {
    cpp_int f = 1;
    for (unsigned i = 2; i <= k; ++i) f *= i;
    return f;
}

QPoly to_q(const DPPoly& x) {
    QPoly r;
    for (const auto& [m, c] : x.terms()) r[{m[0], m[1]}] += cpp_rational(cpp_int(c), fact(m[0]) * fact(m[1]));
    return r;
}

QPoly qmul(const QPoly& a, const QPoly& b, unsigned cap) {
    QPoly r;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            std::pair<unsigned, unsigned> m{ma.first + mb.first, ma.second + mb.second};
            if (m.first + m.second <= cap) r[m] += ca * cb;
        }
    return r;
}

DPPoly from_q(const DPRing& ring, const QPoly& x) {
    const auto& P = ring->params();
    std::vector<DPPoly::Term> terms;
    for (const auto& [m, c] : x) {
        cpp_rational v = c * cpp_rational(fact(m.first) * fact(m.second));
        REQUIRE(denominator(v) == 1);  // integral in the DP basis
        cpp_int z = numerator(v) % cpp_int(P.modulus());
        if (z < 0) z += P.modulus();
        Mono mm{};
        mm[0] = static_cast<std::uint16_t>(m.first);
        mm[1] = static_cast<std::uint16_t>(m.second);
        terms.push_back({mm, static_cast<std::uint64_t>(z)});
    }
    return DPPoly::from_terms(ring, terms);
}

// small integer lifts so the rational computation sees the same element
DPPoly random_ideal(const DPRing& ring, std::mt19937_64& gen, unsigned max_deg) {
    std::vector<DPPoly::Term> terms;
    for (int k = 0; k < 3; ++k) {
        Mono m{};
        m[0] = static_cast<std::uint16_t>(gen() % (max_deg + 1));
        m[1] = static_cast<std::uint16_t>(gen() % (max_deg + 1));
        if (m[0] + m[1] == 0) m[0] = 1;
        terms.push_back({m, gen() % ring->params().modulus()});
    }
    return DPPoly::from_terms(ring, terms);
}

}  // namespace

TEST_CASE("DP product agrees with rational arithmetic") {
    std::mt19937_64 gen(5);
    for (auto [p, n] : {std::pair{2u, 3u}, {3u, 2u}, {5u, 2u}}) {
        auto ring = DPRingDesc::make(RingParams(p, n), {"A", "B"});
        for (int k = 0; k < 60; ++k) {
            DPPoly a = random_ideal(ring, gen, 4), b = random_ideal(ring, gen, 4);
            CHECK(a * b == from_q(ring, qmul(to_q(a), to_q(b), 1000)));
        }
    }
}

TEST_CASE("gamma_q agrees with x^q / q! over Q") {
    std::mt19937_64 gen(9);
    for (auto [p, n] : {std::pair{2u, 2u}, {2u, 3u}, {3u, 2u}}) {
        auto ring = DPRingDesc::make(RingParams(p, n), {"A", "B"});
        for (int k = 0; k < 30; ++k) {
            DPPoly x = random_ideal(ring, gen, 3);
            QPoly xq = to_q(x), pw = {{{0, 0}, 1}};
            for (unsigned q = 0; q <= 6; ++q) {
                QPoly g = pw;
                for (auto& [m, c] : g) c /= cpp_rational(fact(q));
                CHECK(dp_power(x, q) == from_q(ring, g));
                pw = qmul(pw, xq, 1000);
            }
        }
    }
}

TEST_CASE("exp and log in a truncated ring agree with the rational series") {
    std::mt19937_64 gen(13);
    const unsigned cap = 7;
    auto ring = DPRingDesc::make(RingParams(2, 3), {"A", "B"}, {}, cap);
    for (int k = 0; k < 20; ++k) {
        DPPoly x = random_ideal(ring, gen, 2);
        QPoly xq = to_q(x), pw = {{{0, 0}, 1}}, e;
        for (unsigned q = 0; q <= cap; ++q) {
            for (auto& [m, c] : pw) e[m] += c / cpp_rational(fact(q));
            pw = qmul(pw, xq, cap);
        }
        CHECK(exp_ideal(x) == from_q(ring, e));
        CHECK(log_unit(exp_ideal(x)) == x);
    }
}

TEST_CASE("small identities") {
    auto ring = DPRingDesc::make(RingParams(2, 2), {"V"});
    auto V = DPPoly::variable(ring, 0);
    auto one = DPPoly::constant(ring, 1);
    // V^[1] V^[1] = 2 V^[2]
    CHECK((V * V).str() == "2·V^[2]");
    // V^4 = 24 V^[4] = 0 mod 4, V^3 = 6 V^[3] = 2 V^[3]
    CHECK(V.pow(4).is_zero());
    CHECK(V.pow(3).str() == "2·V^[3]");
    // (1 - V)^{-1} = sum k! V^[k]
    CHECK(invert_unit(one - V).str() == "1·V^[0] + 1·V^[1] + 2·V^[2] + 2·V^[3]");
    CHECK(invert_unit(one - V) * (one - V) == one);
    CHECK_THROWS_AS(invert_unit(V), PreconditionError);
    CHECK_THROWS_AS(log_unit(V), PreconditionError);
    CHECK_THROWS_AS(exp_ideal(V), PreconditionError);
    CHECK_THROWS_AS(dp_power(one, 2), PreconditionError);
}

TEST_CASE("gamma of p-divisible constants") {
    RingParams P(2, 3);
    // gamma_k(2) = 2^k / k!
    CHECK(dp_power_of_constant(2, 0, P) == 1);
    CHECK(dp_power_of_constant(2, 1, P) == 2);
    CHECK(dp_power_of_constant(2, 2, P) == 2);
    CHECK(dp_power_of_constant(2, 3, P) == 4);  // 4/3 = 4 * 3 mod 8
    CHECK(dp_power_of_constant(2, 4, P) == 6);  // 2/3
    auto ring = DPRingDesc::make(P, {"V"});
    auto x = DPPoly::constant(ring, 2) + DPPoly::variable(ring, 0);
    CHECK(dp_power(x, 2, true) * DPPoly::constant(ring, 2) == x * x);
}

TEST_CASE("division with a cap") {
    auto ring = DPRingDesc::make(RingParams(3, 2), {"Z"});
    auto Z = DPPoly::variable(ring, 0);
    auto num = Z * Z + Z.scaled(3);
    auto res = divide_filtered(num, Z, 5);
    CHECK(res.exact);
    CHECK(truncate(res.quotient * Z, 5) == truncate(num, 5));
    CHECK_THROWS_AS(divide_filtered(num, DPPoly::constant(ring, 1), 3), PreconditionError);
}

TEST_CASE("truncation and calculus") {
    auto ring = DPRingDesc::make(RingParams(5, 2), {"A", "B"});
    auto x = parse_dp(ring, "3·V^[2,1] + 1·V^[0,4] + 7·V^[1,0]");
    CHECK(parse_dp(ring, x.str()) == x);
    CHECK(truncate(x, 3).str() == "7·V^[1,0] + 3·V^[2,1]");
    CHECK(dp_derivative(dp_antiderivative(x, 0), 0) == x);
    CHECK(dp_derivative(x, 1).str() == "3·V^[2,0] + 1·V^[0,3]");
}

TEST_CASE("property: substitution is a DP ring map") {
    std::mt19937_64 gen(21);
    auto src = DPRingDesc::make(RingParams(3, 2), {"A", "B"});
    auto dst = DPRingDesc::make(RingParams(3, 2), {"A", "B"});
    auto A = DPPoly::variable(dst, 0), B = DPPoly::variable(dst, 1);
    DPSubstitution phi(src, dst, {A + B * B, A.scaled(2) + B});
    for (int k = 0; k < 30; ++k) {
        DPPoly a = random_ideal(src, gen, 3), b = random_ideal(src, gen, 3);
        CHECK(phi(a * b) == phi(a) * phi(b));
        CHECK(phi(a + b) == phi(a) + phi(b));
        CHECK(phi(dp_power(a, 3)) == dp_power(phi(a), 3));
    }
}

TEST_CASE("property: nilpotency index") {
    std::mt19937_64 gen(1);
    for (auto [p, n] : {std::pair{2u, 2u}, {2u, 3u}, {3u, 2u}, {5u, 2u}}) {
        RingParams P(p, n);
        const auto K = nilpotency_bound(P);
        auto ring = DPRingDesc::make(P, {"A", "B"});
        for (int k = 0; k < 25; ++k) CHECK(random_ideal(ring, gen, 3).pow(K).is_zero());
        CHECK(!DPPoly::variable(ring, 0).pow(K - 1).is_zero());
    }
}
