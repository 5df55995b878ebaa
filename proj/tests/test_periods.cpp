#include "pcris/periods.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <doctest.h>

#include <algorithm>
#include <random>

using namespace pcris;
using boost::multiprecision::cpp_int;

namespace {

PeriodModel make_model(std::uint32_t p, std::uint32_t n, std::uint32_t m = 1, CMode c = CMode::pi) {
    auto d = PeriodModelDesc::defaults(p, n, m);
    d.c = c;
    return PeriodModel(d);
}

// -(k-1)! p^m Z^[k] summed until the coefficient vanishes mod p^n
DPPoly t_oracle(const PeriodModel& model, const DPRing& ring) {
    const auto& P = model.params();
    const cpp_int mod = P.modulus();
    DPPoly r(ring);
    cpp_int f = 1;
    for (std::uint16_t k = 1; k < 200; ++k) {
        if (k > 1) f *= k - 1;
        cpp_int c = (mod - (f * boost::multiprecision::pow(cpp_int(P.p()), model.desc().m)) % mod) % mod;
        Mono mono{};
        mono[var::Z] = k;
        r += DPPoly::monomial(ring, mono, static_cast<std::uint64_t>(c));
    }
    return r;
}

PeriodElem random_elem(const PeriodModel& model, std::mt19937_64& gen) {
    const auto& ring = model.module_ring();
    // small exponents so triple products stay inside the numerator bound
    std::vector<ExponentVec> exps;
    for (const auto& e : enumerate_exponents(model.shape()))
        if (std::all_of(e.num.begin(), e.num.end(), [&](std::int64_t v) { return 4 * std::abs(v) <= model.shape().N; }))
            exps.push_back(e);
    PeriodElem x(model.shape(), ring);
    for (int k = 0; k < 4; ++k) {
        Mono mono{};
        mono[var::Z] = static_cast<std::uint16_t>(gen() % 3);
        mono[var::Xi] = static_cast<std::uint16_t>(gen() % 3);
        mono[var::dir(2)] = static_cast<std::uint16_t>(gen() % 2);
        x.add_term(exps[gen() % exps.size()], DPPoly::monomial(ring, mono, gen() % model.params().modulus()));
    }
    return x;
}

}  // namespace

TEST_CASE("t agrees with the logarithm series") {
    for (auto [p, n, m] : {std::tuple{2u, 2u, 1u}, {2u, 3u, 1u}, {3u, 2u, 1u}, {2u, 2u, 2u}, {5u, 2u, 1u}}) {
        auto model = make_model(p, n, m);
        const auto& R = model.base_ring();
        CHECK(model.base(R).t == t_oracle(model, R));
    }
}

TEST_CASE("t for p=2, n=2, m=1") {
    auto model = make_model(2, 2);
    CHECK(model.base(model.base_ring()).t.str() == "2·V^[1,0] + 2·V^[2,0]");
}

TEST_CASE("q powers: two constructions agree and exponents add") {
    for (auto [p, n, m] : {std::tuple{2u, 2u, 1u}, {3u, 2u, 1u}, {2u, 2u, 2u}}) {
        auto model = make_model(p, n, m);
        const auto& R = model.base_ring();
        const auto& B = model.base(R);
        CHECK(model.q_power(PadicExponent::integer(1, p), R) == B.q);
        CHECK(model.q_power(PadicExponent::integer(-1, p), R) == B.qinv);
        CHECK(B.q * B.qinv == B.one);
        std::vector<PadicExponent> alphas;
        for (std::uint32_t lev = 0; lev <= m; ++lev)
            for (std::int64_t a = -5; a <= 5; ++a) alphas.emplace_back(a, lev, p);
        for (const auto& a : alphas) {
            CHECK(model.q_power(a, R) == model.q_power_series(a, R));
            for (const auto& b : alphas) CHECK(model.q_power(a, R) * model.q_power(b, R) == model.q_power(a + b, R));
        }
    }
}

TEST_CASE("u_alpha factors q^alpha - 1") {
    for (std::uint32_t p : {2u, 3u}) {
        auto model = make_model(p, 2);
        const auto& R = model.base_ring();
        const auto& B = model.base(R);
        for (std::int64_t a = -6; a <= 6; ++a) {
            auto u = model.u_alpha(a, R);
            CHECK(model.q_power(PadicExponent::integer(a, p), R) - B.one == (B.t * u).scaled_signed(a));
            if (a != 0) CHECK(u * model.u_alpha_inverse(a, R) == B.one);
        }
        for (std::uint32_t s = 1; s <= 6; ++s) CHECK(dp_power(B.one - B.qinv, s) == B.t * model.h(s, R));
    }
}

TEST_CASE("Frobenius fixes the q structure") {
    for (std::uint32_t p : {2u, 3u}) {
        auto model = make_model(p, 2);
        const auto& R = model.base_ring();
        const auto& B = model.base(R);
        CHECK(frobenius_phi(model, B.q) == B.q.pow(p));
        CHECK(frobenius_phi(model, B.t) == B.t.scaled(p));
        std::mt19937_64 gen(p);
        auto x = random_elem(model, gen), y = random_elem(model, gen);
        CHECK(frobenius_phi(model, x * y) == frobenius_phi(model, x) * frobenius_phi(model, y));
    }
}

TEST_CASE("binomial powers") {
    auto model = make_model(2, 3);
    const auto& R = model.base_ring();
    const auto one = DPPoly::constant(R, 1);
    const auto v = DPPoly::variable(R, var::Z);
    CHECK(binomial_power(R, var::Z, 1) == one + v);
    CHECK(binomial_power(R, var::Z, -1) * (one + v) == one);
    for (std::int64_t a = -4; a <= 4; ++a)
        for (std::int64_t b = -4; b <= 4; ++b)
            CHECK(binomial_power(R, var::Z, a) * binomial_power(R, var::Z, b) == binomial_power(R, var::Z, a + b));
}

TEST_CASE("period elements: ring laws, serialization, eigen decomposition") {
    for (CMode c : {CMode::pi, CMode::one}) {
        auto model = make_model(2, 2, 1, c);
        std::mt19937_64 gen(5);
        for (int k = 0; k < 30; ++k) {
            auto x = random_elem(model, gen), y = random_elem(model, gen), z = random_elem(model, gen);
            CHECK(x * (y + z) == x * y + x * z);
            CHECK((x * y) * z == x * (y * z));
            CHECK(x * y == y * x);
            CHECK(deserialize(model.shape(), model.module_ring(), serialize(x)) == x);
            for (std::size_t i = 2; i <= 3; ++i) {
                PeriodElem sum(model.shape(), model.module_ring());
                for (const auto& [alpha, comp] : decompose_eigen(x, i)) {
                    for (const auto& [e, cf] : comp.terms()) CHECK(character(model.shape(), e, i) == alpha);
                    sum = sum + comp;
                }
                CHECK(sum == x);
            }
        }
    }
}

TEST_CASE("divisibility constants verify") {
    for (auto [p, n, m] : {std::tuple{2u, 2u, 1u}, {3u, 2u, 1u}}) {
        auto model = make_model(p, n, m);
        for (const auto& e : verify_constants(model)) CHECK_MESSAGE(e.ok, e.claim_id << " " << e.detail);
    }
}
