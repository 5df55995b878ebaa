#include "pcris/witt.hpp"

#include <doctest.h>

#include <random>

using namespace pcris;

namespace {

std::int64_t binom(std::int64_t n, std::int64_t k) {
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::int64_t mod(std::int64_t a, std::int64_t q) { return ((a % q) + q) % q; }
std::int64_t ipow(std::int64_t b, std::int64_t e) {
    std::int64_t r = 1;
    while (e--) r *= b;
    return r;
}

// length-2 Witt sum and product written out by hand
std::pair<std::int64_t, std::int64_t> w2_sum(std::int64_t x0, std::int64_t x1, std::int64_t y0, std::int64_t y1, std::int64_t p,
                                             std::int64_t q) {
    std::int64_t s1 = x1 + y1;
    for (std::int64_t i = 1; i < p; ++i) s1 -= binom(p, i) / p * ipow(x0, i) * ipow(y0, p - i);
    return {mod(x0 + y0, q), mod(s1, q)};
}
std::pair<std::int64_t, std::int64_t> w2_prod(std::int64_t x0, std::int64_t x1, std::int64_t y0, std::int64_t y1, std::int64_t p,
                                              std::int64_t q) {
    return {mod(x0 * y0, q), mod(ipow(x0, p) * y1 + ipow(y0, p) * x1 + p * x1 * y1, q)};
}

}  // namespace

TEST_CASE("length-2 sum and product match the closed formulas, exhaustively") {
    for (auto [p, q] : {std::pair<std::int64_t, std::int64_t>{2, 2}, {2, 4}, {3, 3}, {3, 9}}) {
        auto R = QuotientPolyRing::zmod(q);
        WittRing<QuotientPolyRing> W(R, static_cast<std::uint32_t>(p), 2);
        for (std::int64_t x0 = 0; x0 < q; ++x0)
            for (std::int64_t x1 = 0; x1 < q; ++x1)
                for (std::int64_t y0 = 0; y0 < q; ++y0)
                    for (std::int64_t y1 = 0; y1 < q; ++y1) {
                        auto a = std::vector{R.from_int(x0), R.from_int(x1)};
                        auto b = std::vector{R.from_int(y0), R.from_int(y1)};
                        auto s = W.add(a, b);
                        auto m = W.mul(a, b);
                        auto [s0, s1] = w2_sum(x0, x1, y0, y1, p, q);
                        auto [m0, m1] = w2_prod(x0, x1, y0, y1, p, q);
                        CHECK(s[0][0] == s0);
                        CHECK(s[1][0] == s1);
                        CHECK(m[0][0] == m0);
                        CHECK(m[1][0] == m1);
                    }
    }
}

TEST_CASE("ghost components over the integers") {
    std::mt19937_64 gen(11);
    for (std::uint32_t p : {2u, 3u}) {
        WittRing<IntegerRing> W(IntegerRing{}, p, 3);
        for (int k = 0; k < 50; ++k) {
            std::vector<BigInt> a, b;
            for (int i = 0; i < 3; ++i) {
                a.push_back(static_cast<std::int64_t>(gen() % 41) - 20);
                b.push_back(static_cast<std::int64_t>(gen() % 41) - 20);
            }
            auto naive = [&](const std::vector<BigInt>& v) {
                std::vector<BigInt> w;
                for (std::uint32_t i = 0; i < 3; ++i) {
                    BigInt s = 0, pj = 1;
                    for (std::uint32_t j = 0; j <= i; ++j) {
                        s += pj * boost::multiprecision::pow(v[j], static_cast<unsigned>(ipow(p, i - j)));
                        pj *= p;
                    }
                    w.push_back(s);
                }
                return w;
            };
            auto ga = naive(a), gb = naive(b), gs = naive(W.add(a, b)), gm = naive(W.mul(a, b));
            for (int i = 0; i < 3; ++i) {
                CHECK(gs[i] == ga[i] + gb[i]);
                CHECK(gm[i] == ga[i] * gb[i]);
            }
            CHECK(W.ghost(a) == ga);
        }
    }
}

TEST_CASE("small values") {
    auto F2 = QuotientPolyRing::zmod(2);
    WittRing<QuotientPolyRing> W(F2, 2, 3);
    // 2 = V(1) and -1 = (1,1,1) in W(F_2)
    auto two = W.from_int(2);
    CHECK(W.eq(two, W.verschiebung(W.one())));
    CHECK(W.eq(W.neg(W.one()), std::vector{F2.one(), F2.one(), F2.one()}));
    CHECK(W.eq(W.from_int(8), W.zero()));
    CHECK(!W.eq(W.from_int(4), W.zero()));
}

TEST_CASE("F V = p and V F = p over F_4 and F_2[s]/(s^3)") {
    std::mt19937_64 gen(3);
    for (const auto& R : {QuotientPolyRing::f4(), QuotientPolyRing::truncated(2, 3)}) {
        WittRing<QuotientPolyRing> W(R, 2, 3);
        for (int k = 0; k < 40; ++k) {
            std::vector<QuotientPolyRing::Elem> a;
            for (int i = 0; i < 3; ++i) a.push_back(R.from_index(gen() % R.size()));
            CHECK(W.eq(W.frobenius(W.verschiebung(a)), W.mul(W.from_int(2), a)));
            CHECK(W.eq(W.verschiebung(W.frobenius(a)), W.mul(W.from_int(2), a)));
            CHECK(W.eq(W.frobenius_polynomial(a), W.frobenius_componentwise(a)));
        }
    }
}

TEST_CASE("Frobenius needs characteristic p") {
    WittRing<QuotientPolyRing> W(QuotientPolyRing::zmod(4), 2, 2);
    CHECK_THROWS_AS(W.frobenius(W.one()), std::logic_error);
    CHECK_THROWS_AS(W.add(W.one(), std::vector<QuotientPolyRing::Elem>{}), std::invalid_argument);
}

TEST_CASE("Teichmuller lift is multiplicative on F_4") {
    auto R = QuotientPolyRing::f4();
    WittRing<QuotientPolyRing> W(R, 2, 3);
    for (const auto& x : R.elements())
        for (const auto& y : R.elements()) CHECK(W.eq(W.mul(W.teichmuller(x), W.teichmuller(y)), W.teichmuller(R.mul(x, y))));
}

TEST_CASE("perfection of F_2[s]/(s^4)") {
    // s^4 = 0: (0, s, s) is not coherent since s^2 != 0
    auto R = QuotientPolyRing::truncated(2, 4);
    PerfectionRing<QuotientPolyRing> P(R, 2, 2);
    CHECK(P.coherent(P.one()));
    auto s = R.s();
    CHECK(!P.coherent({R.zero(), s, s}));
    CHECK(P.coherent({R.zero(), R.mul(s, s), s}));
    CHECK(P.coherent({R.zero(), R.zero(), R.mul(s, s)}));
    WittRing<PerfectionRing<QuotientPolyRing>> W(P, 2, 2);
    CHECK(W.eq(W.mul(W.one(), W.one()), W.one()));
}
