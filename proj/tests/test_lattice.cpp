#include "pcris/errors.hpp"
#include "pcris/lattice.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace pcris;

namespace {

LatticeShape shape(std::uint32_t p, std::uint32_t m, std::uint32_t d, std::uint32_t r, CMode c, std::int64_t N) {
    LatticeShape s;
    s.p = p;
    s.m = m;
    s.d = d;
    s.r = r;
    s.c = c;
    s.N = N;
    return s;
}

std::vector<PadicExponent> ints(std::initializer_list<std::int64_t> v, std::uint32_t p) {
    std::vector<PadicExponent> r;
    for (auto x : v) r.push_back(PadicExponent::integer(x, p));
    return r;
}

}  // namespace

TEST_CASE("semistable normal form") {
    auto s = shape(2, 1, 2, 2, CMode::pi, 8);
    // [T_1 T_2] = [pi]
    CHECK(normalize_semistable(s, {{2, 2, 0, 0}}).num == std::vector<std::int64_t>{0, 0, 0, 2});
    CHECK(normalize_semistable(s, {{2, 0, 0, 1}}).num == std::vector<std::int64_t>{2, 0, 0, 1});
    // (3/2, 1/2, 0 | 0) -> (1, 0, 0 | 1/2)
    CHECK(normalize_semistable(s, {{3, 1, 0, 0}}).num == std::vector<std::int64_t>{2, 0, 0, 1});
    auto one = shape(2, 1, 2, 2, CMode::one, 8);
    CHECK(normalize_semistable(one, {{3, 1, 0, 0}}).num == std::vector<std::int64_t>{3, 1, 0, 0});
}

TEST_CASE("property: normal form is idempotent and constant on relation orbits") {
    std::mt19937_64 gen(19);
    for (std::uint32_t r : {1u, 2u, 3u}) {
        auto s = shape(3, 1, 2, r, CMode::pi, 1000);
        for (int k = 0; k < 300; ++k) {
            ExponentVec e{{0, 0, 0, 0}};
            for (auto& v : e.num) v = static_cast<std::int64_t>(gen() % 40);
            auto n1 = normalize_semistable(s, e);
            CHECK(normalize_semistable(s, n1) == n1);
            const std::int64_t t = static_cast<std::int64_t>(gen() % 10);
            ExponentVec shifted = n1;
            for (std::size_t i = 0; i < r; ++i) shifted.num[i] += t;
            shifted.num[s.pi_index()] -= t;
            CHECK(normalize_semistable(s, shifted) == n1);
            std::int64_t mn = n1.num[0];
            for (std::size_t i = 0; i < r; ++i) mn = std::min(mn, n1.num[i]);
            CHECK(mn == 0);
        }
    }
}

TEST_CASE("exponent enumeration equals the normalized box") {
    for (CMode c : {CMode::pi, CMode::one}) {
        auto s = shape(2, 1, 2, 2, c, 2);
        std::set<ExponentVec> expect;
        for (std::int64_t a = -2; a <= 2; ++a)
            for (std::int64_t b = -2; b <= 2; ++b)
                for (std::int64_t x = -2; x <= 2; ++x)
                    for (std::int64_t y = -2; y <= 2; ++y) {
                        ExponentVec e{{a, b, x, y}};
                        if (!in_sector(s, e)) continue;
                        if (normalize_semistable(s, e) == e) expect.insert(e);
                    }
        auto got = enumerate_exponents(s);
        CHECK(std::set<ExponentVec>(got.begin(), got.end()) == expect);
        CHECK(std::is_sorted(got.begin(), got.end()));
    }
}

TEST_CASE("characters") {
    auto s = shape(2, 1, 2, 2, CMode::pi, 8);
    ExponentVec e{{1, 3, -2, 0}};
    CHECK(character(s, e, 2).scaled(1) == 2);  // e_2 - e_1
    CHECK(character(s, e, 3).scaled(1) == -2);  // e_3
    CHECK_THROWS_AS(add_exponents(s, {{8, 0, 0, 0}}, {{2, 0, 0, 0}}), ExponentOverflow);
}

TEST_CASE("kernel of the log-point structure map") {
    const MonoidChart Q{ChartKind::padic_group, 1, 1, 2};
    const MonoidChart Z{ChartKind::free_group, 1, 0, 2};
    auto B = kernel_L({Q, Z}, Q, {{1, 1}}, 0);
    REQUIRE(B.size() == 1);
    CHECK(B[0] == ints({1, -1}, 2));
}

TEST_CASE("kernel for the DP polynomial algebra chart") {
    for (std::uint32_t r : {1u, 2u, 3u}) {
        const MonoidChart Q{ChartKind::padic_group, r, 2, 3};
        const MonoidChart Z{ChartKind::free_group, r, 0, 3};
        std::vector<std::vector<std::int64_t>> map(r, std::vector<std::int64_t>(2 * r, 0));
        for (std::uint32_t i = 0; i < r; ++i) map[i][i] = map[i][r + i] = 1;
        auto B = kernel_L({Q, Z}, Q, map);
        REQUIRE(B.size() == r);
        for (std::uint32_t i = 0; i < r; ++i) {
            for (std::uint32_t j = 0; j < 2 * r; ++j) {
                std::int64_t expect = j == i ? -1 : (j == r + i ? 1 : 0);
                CHECK(B[i][j] == PadicExponent::integer(expect, 3));
            }
        }
    }
}

TEST_CASE("kernel vectors map to zero") {
    std::mt19937_64 gen(23);
    const MonoidChart Z3{ChartKind::free_group, 3, 0, 2};
    const MonoidChart Z2{ChartKind::free_group, 2, 0, 2};
    for (int k = 0; k < 30; ++k) {
        std::vector<std::vector<std::int64_t>> map(2, std::vector<std::int64_t>(3));
        for (auto& row : map)
            for (auto& v : row) v = static_cast<std::int64_t>(gen() % 7) - 3;
        auto B = kernel_L({Z3}, Z2, map);
        for (const auto& v : B)
            for (const auto& row : map) {
                PadicExponent s = PadicExponent::integer(0, 2);
                for (std::size_t j = 0; j < 3; ++j) s = s + v[j].times(row[j]);
                CHECK(s.is_zero());
            }
    }
    const MonoidChart Z{ChartKind::free_group, 2, 0, 2};
    CHECK(kernel_L({Z}, Z, {{1, 0}, {0, 1}}).empty());
}

TEST_CASE("perfection and Frobenius") {
    const MonoidChart N{ChartKind::free_nonneg, 1, 0, 2};
    auto P = perfection(N, 3);
    CHECK(P.kind == ChartKind::padic_nonneg);
    CHECK(P.level == 3);
    CHECK(frobenius_monoid(P, {PadicExponent(1, 3, 2)}) == std::vector{PadicExponent(1, 2, 2)});
    CHECK(frobenius_surjective_onto_lower_level(P));
    CHECK(!frobenius_surjective_onto_lower_level(N));
    CHECK_THROWS_AS(frobenius_monoid(N, {PadicExponent(1, 1, 2)}), PreconditionError);
    CHECK_THROWS_AS(frobenius_monoid(N, {PadicExponent::integer(-1, 2)}), PreconditionError);
}
