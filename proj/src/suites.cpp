#include "pcris/suites.hpp"
#include "pcris/witt.hpp"

#include <algorithm>
#include <set>
#include <future>
#include <map>

namespace pcris {

namespace {

using Json = nlohmann::json;

CheckEntry tally(std::string id, std::string anchor, Json params, std::size_t cases, std::size_t bad, std::string first_bad) {
    auto e = CheckEntry::make(std::move(id), std::move(anchor), std::move(params));
    e.ok = bad == 0;
    e.witness = {{"cases", cases}, {"failures", bad}};
    e.detail = std::move(first_bad);
    return e;
}

// ---- Witt vectors ----

void witt_ring_checks(const QuotientPolyRing& coeffs, std::uint32_t p, std::uint32_t n, Rng& rng, std::size_t triples,
                      std::vector<CheckEntry>& out) {
    WittRing<QuotientPolyRing> W(coeffs, p, n);
    const Json params = {{"p", p}, {"n", n}, {"coefficients", coeffs.name()}};
    auto rand_elem = [&] { return coeffs.from_index(rng.below(coeffs.size())); };
    auto rand_vec = [&] {
        WittRing<QuotientPolyRing>::Vec v;
        for (std::uint32_t i = 0; i < n; ++i) v.push_back(rand_elem());
        return v;
    };

    std::size_t bad = 0;
    std::string first;
    for (std::size_t k = 0; k < triples; ++k) {
        auto a = rand_vec(), b = rand_vec(), c = rand_vec();
        const bool ok = W.eq(W.add(W.add(a, b), c), W.add(a, W.add(b, c))) && W.eq(W.add(a, b), W.add(b, a)) &&
                        W.eq(W.mul(W.mul(a, b), c), W.mul(a, W.mul(b, c))) && W.eq(W.mul(a, b), W.mul(b, a)) &&
                        W.eq(W.mul(a, W.add(b, c)), W.add(W.mul(a, b), W.mul(a, c))) && W.eq(W.add(a, W.zero()), a) &&
                        W.eq(W.mul(a, W.one()), a) && W.eq(W.add(a, W.neg(a)), W.zero());
        if (!ok && bad++ == 0) first = "triple #" + std::to_string(k);
    }
    out.push_back(tally("witt.ring_axioms", "W_n(R) is a commutative ring", params, triples, bad, first));

    // [x][y] = [xy]: exhaustive on small carriers
    bad = 0;
    first.clear();
    std::size_t cases = 0;
    const bool exhaustive = coeffs.size() <= 9;
    auto check_pair = [&](const auto& x, const auto& y) {
        ++cases;
        if (!W.eq(W.mul(W.teichmuller(x), W.teichmuller(y)), W.teichmuller(coeffs.mul(x, y))) && bad++ == 0)
            first = coeffs.str(x) + " * " + coeffs.str(y);
    };
    if (exhaustive) {
        const auto all = coeffs.elements();
        for (const auto& x : all)
            for (const auto& y : all) check_pair(x, y);
    } else {
        for (std::size_t k = 0; k < triples; ++k) check_pair(rand_elem(), rand_elem());
    }
    auto e = tally("witt.teichmuller", "[x][y] = [xy]", params, cases, bad, first);
    e.witness["exhaustive"] = exhaustive;
    out.push_back(std::move(e));

    // F V = p through the universal polynomials; V F = p as well in characteristic p
    bad = 0;
    first.clear();
    const auto pW = W.from_int(p);
    for (std::size_t k = 0; k < triples; ++k) {
        auto a = rand_vec();
        bool ok = W.eq(W.frobenius_truncating(W.verschiebung_extend(a)), W.mul(pW, a));
        if (W.char_p())
            ok = ok && W.eq(W.frobenius(W.verschiebung(a)), W.mul(pW, a)) &&
                 W.eq(W.verschiebung(W.frobenius(a)), W.mul(pW, a)) &&
                 W.eq(W.frobenius_polynomial(a), W.frobenius_componentwise(a));
        if (!ok && bad++ == 0) first = "sample #" + std::to_string(k);
    }
    out.push_back(tally("witt.frobenius_verschiebung", "F V = p", params, triples, bad, first));

    // ghost map is a ring map, and W_n commutes with reduction of coefficients
    bad = 0;
    first.clear();
    std::optional<QuotientPolyRing> reduced;
    if (coeffs.degree() == 1 && coeffs.modulus() != static_cast<std::int64_t>(p)) reduced = QuotientPolyRing::zmod(p);
    std::optional<WittRing<QuotientPolyRing>> Wr;
    if (reduced) Wr.emplace(*reduced, p, n);
    auto red = [&](const auto& v) {
        return map_components(v, [&](const auto& x) { return reduced->from_int(BigInt(x[0])); });
    };
    for (std::size_t k = 0; k < triples; ++k) {
        auto a = rand_vec(), b = rand_vec();
        auto ga = W.ghost(a), gb = W.ghost(b), gs = W.ghost(W.add(a, b)), gp = W.ghost(W.mul(a, b));
        bool ok = true;
        for (std::uint32_t i = 0; i < n; ++i)
            ok = ok && coeffs.eq(gs[i], coeffs.add(ga[i], gb[i])) && coeffs.eq(gp[i], coeffs.mul(ga[i], gb[i]));
        if (reduced) {
            ok = ok && Wr->eq(red(W.add(a, b)), Wr->add(red(a), red(b))) &&
                 Wr->eq(red(W.mul(a, b)), Wr->mul(red(a), red(b)));
            auto gra = Wr->ghost(red(a));
            for (std::uint32_t i = 0; i < n; ++i) ok = ok && reduced->eq(gra[i], reduced->from_int(BigInt(ga[i][0])));
        }
        if (!ok && bad++ == 0) first = "pair #" + std::to_string(k);
    }
    e = tally("witt.ghost_naturality", "ghost components are additive, multiplicative and natural", params, triples, bad, first);
    e.witness["reduction_checked"] = reduced.has_value();
    out.push_back(std::move(e));
}

// ---- divided powers ----

DPPoly random_ideal_element(const DPRing& ring, Rng& rng, std::uint32_t max_deg) {
    const auto& P = ring->params();
    std::vector<DPPoly::Term> terms;
    const auto count = 1 + rng.below(3);
    for (std::uint64_t k = 0; k < count; ++k) {
        Mono m{};
        do {
            for (std::size_t v = 0; v < ring->nvars(); ++v) m[v] = static_cast<std::uint16_t>(rng.below(max_deg + 1));
        } while (mono_degree(m) == 0 || mono_degree(m) > max_deg);
        terms.push_back({m, rng.below(P.modulus())});
    }
    return DPPoly::from_terms(ring, std::move(terms));
}

std::uint64_t factorial_mod(std::uint32_t q, const RingParams& P) {
    std::uint64_t f = 1 % P.modulus();
    for (std::uint32_t i = 2; i <= q; ++i) f = P.mul(f, i % P.modulus());
    return f;
}

std::uint64_t binom_mod(std::uint32_t a, std::uint32_t b, const RingParams& P) {
    return BinomTable::get(P)->operator()(a, b);
}

}  // namespace

std::vector<CheckEntry> witt_laws(std::uint32_t p, std::uint32_t n, std::uint64_t seed, std::size_t triples) {
    std::vector<CheckEntry> out;
    Rng rng(seed);
    const std::int64_t pp = p;
    for (const auto& R : {QuotientPolyRing::zmod(pp), QuotientPolyRing::zmod(pp * pp), QuotientPolyRing::truncated(pp, 3)})
        witt_ring_checks(R, p, n, rng, triples, out);
    return out;
}

std::vector<CheckEntry> dp_laws(std::uint32_t p, std::uint32_t n, std::uint64_t seed, std::size_t samples) {
    const RingParams P(p, n);
    const std::uint32_t K = nilpotency_bound(P);
    const DPRing free_ring = DPRingDesc::make(P, {"V1", "V2"});
    const DPRing capped = DPRingDesc::make(P, {"V1", "V2"}, {}, 2 * K + 4);
    const Json params = {{"p", p}, {"n", n}, {"K", K}};
    Rng rng(seed);
    std::vector<CheckEntry> out;

    std::size_t bad_fact = 0, bad_prod = 0, bad_sum = 0, bad_hom = 0, bad_explog = 0, bad_nil = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        const DPPoly x = random_ideal_element(free_ring, rng, 3);
        const DPPoly y = random_ideal_element(free_ring, rng, 3);
        const auto gx = dp_powers(x, K + 2);
        const auto gy = dp_powers(y, K + 2);

        bool ok = true;
        for (std::uint32_t q = 0; q <= K + 2; ++q) ok = ok && gx[q].scaled(factorial_mod(q, P)) == x.pow(q);
        bad_fact += !ok;

        ok = true;
        for (std::uint32_t a = 0; a <= 3; ++a)
            for (std::uint32_t b = 0; a + b <= K + 2 && b <= 3; ++b)
                ok = ok && gx[a] * gx[b] == gx[a + b].scaled(binom_mod(a + b, a, P));
        bad_prod += !ok;

        ok = true;
        const auto gxy = dp_powers(x + y, 4);
        for (std::uint32_t q = 0; q <= 4; ++q) {
            DPPoly acc(free_ring);
            for (std::uint32_t i = 0; i <= q; ++i) acc += gx[i] * gy[q - i];
            ok = ok && acc == gxy[q];
        }
        bad_sum += !ok;

        ok = true;
        const std::int64_t c = rng.between(-static_cast<std::int64_t>(P.modulus()), static_cast<std::int64_t>(P.modulus()));
        const auto gcx = dp_powers(x.scaled_signed(c), 4);
        for (std::uint32_t q = 0; q <= 4; ++q) ok = ok && gcx[q] == gx[q].scaled(P.pow(P.reduce(c), q));
        bad_hom += !ok;

        const DPPoly xc = x.in_ring(capped);
        const DPPoly one = DPPoly::constant(capped, 1);
        bad_explog += !(log_unit(exp_ideal(xc)) == xc && exp_ideal(log_unit(one + xc)) == one + xc);

        bad_nil += !x.pow(K).is_zero();
    }
    out.push_back(tally("dp.factorial", "q! gamma_q(x) = x^q", params, samples, bad_fact, ""));
    out.push_back(tally("dp.product", "gamma_a(x) gamma_b(x) = C(a+b,a) gamma_{a+b}(x)", params, samples, bad_prod, ""));
    out.push_back(tally("dp.sum", "gamma_q(x+y) = sum gamma_i(x) gamma_{q-i}(y)", params, samples, bad_sum, ""));
    out.push_back(tally("dp.homogeneity", "gamma_q(cx) = c^q gamma_q(x)", params, samples, bad_hom, ""));
    out.push_back(tally("dp.exp_log", "exp and log are inverse on the DP ideal", params, samples, bad_explog, ""));

    // K is attained: V^{K-1} = (K-1)! V^[K-1] survives, every x^K dies
    auto e = tally("dp.nilpotency", "x^K = 0 on the DP ideal with K = min{k : v_p(k!) >= n}", params, samples, bad_nil, "");
    const DPPoly v = DPPoly::variable(free_ring, 0);
    const bool attained = !v.pow(K - 1).is_zero() && v.pow(K).is_zero();
    e.ok = e.ok && attained;
    e.witness["attained_by_V1"] = attained;
    out.push_back(std::move(e));
    return out;
}

namespace {

DPPoly random_coeff(const DPRing& ring, Rng& rng, const std::vector<std::size_t>& vars, std::uint32_t max_deg) {
    const auto& P = ring->params();
    std::vector<DPPoly::Term> terms;
    const auto count = 1 + rng.below(4);
    for (std::uint64_t k = 0; k < count; ++k) {
        Mono m{};
        for (auto v : vars) m[v] = static_cast<std::uint16_t>(rng.below(max_deg + 1));
        terms.push_back({m, rng.below(P.modulus())});
    }
    return DPPoly::from_terms(ring, std::move(terms));
}

PeriodElem random_elem(const LatticeShape& s, const DPRing& ring, const std::vector<ExponentVec>& pool, Rng& rng,
                       const std::vector<std::size_t>& vars, std::uint32_t max_deg) {
    PeriodElem x(s, ring);
    const auto count = 1 + rng.below(4);
    for (std::uint64_t k = 0; k < count; ++k) x.add_term(pool[rng.below(pool.size())], random_coeff(ring, rng, vars, max_deg));
    return x;
}

}  // namespace

std::vector<CheckEntry> eigen_checks(const PeriodModel& model, std::uint64_t seed, std::size_t samples) {
    const auto& s = model.shape();
    const DPRing& ring = model.module_ring(Chart::X);
    const auto pool = enumerate_exponents(s);
    Rng rng(seed);
    std::vector<CheckEntry> out;
    for (std::size_t i = 2; i <= s.d + 1; ++i) {
        std::size_t bad = 0;
        std::string first;
        for (std::size_t k = 0; k < samples; ++k) {
            const PeriodElem x = random_elem(s, ring, pool, rng, {var::Z, var::Xi}, 2);
            const auto parts = decompose_eigen(x, i);
            PeriodElem sum(s, ring);
            bool ok = true;
            for (const auto& [alpha, part] : parts) {
                sum = sum + part;
                ok = ok && sigma(model, part, i) == part.scaled(model.q_power(alpha, ring));
            }
            ok = ok && sum == x;
            if (!ok && bad++ == 0) first = x.str();
        }
        auto e = tally("eigen.decomposition", "A_model splits into sigma_i-eigenspaces F_alpha with eigenvalue q^alpha",
                       {{"i", i}, {"semistable_direction", i <= s.r}, {"c", to_string(s.c)}}, samples, bad, first);
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<CheckEntry> calculus_checks(const PeriodModel& model0, std::uint64_t seed, std::size_t samples) {
    // room for the exponent shifts of d and int
    PeriodModelDesc desc = model0.desc();
    desc.N += 2 * model0.shape().denom();
    const PeriodModel model(desc);
    const auto& s = model.shape();
    Rng rng(seed);
    std::vector<CheckEntry> out;
    const Json base = {{"p", model.params().p()}, {"n", model.params().n()}, {"c", to_string(s.c)}};
    const auto pool = enumerate_exponents(model0.shape());
    const DPRing& rx = model.module_ring(Chart::X);
    const DPRing& ry = model.module_ring(Chart::Y);

    for (std::size_t i = 2; i <= s.d + 1; ++i) {
        const std::size_t w = var::dir(i);
        Json params = base;
        params["i"] = i;

        // vanishing variant: -(1+X) d/dX
        std::size_t bad = 0;
        for (std::uint32_t j = 0; j <= 6; ++j) {
            Mono a{}, b{};
            a[w] = static_cast<std::uint16_t>(j + 1);
            b[w] = static_cast<std::uint16_t>(j);
            const PeriodElem lhs = derive(model, PeriodElem::scalar(s, -DPPoly::monomial(rx, a)), i, CalculusVariant::vanishing);
            const PeriodElem rhs = PeriodElem::scalar(s, DPPoly::monomial(rx, b) + DPPoly::monomial(rx, a, (j + 1) % model.params().modulus()));
            bad += lhs != rhs;
        }
        out.push_back(tally("calculus.vanishing_step", "d(-X^[j+1]) = X^[j] + (j+1) X^[j+1]", params, 7, bad, ""));

        struct Variant {
            CalculusVariant v;
            const DPRing* ring;
        };
        std::vector<Variant> variants = {{CalculusVariant::vanishing, &rx}};
        variants.push_back(i <= s.r ? Variant{CalculusVariant::invariants2, &ry} : Variant{CalculusVariant::torus, &ry});
        for (const auto& [v, ring] : variants) {
            std::size_t bad_inv = 0, bad_comm = 0;
            std::string first;
            for (std::size_t k = 0; k < samples; ++k) {
                PeriodElem x = random_elem(s, *ring, pool, rng, {var::Z, var::Xi, w}, 3);
                if (v == CalculusVariant::invariants2) x = x.times_exponent(unit_exponent(s, 0, s.denom()));
                try {
                    if (derive(model, integrate(model, x, i, v), i, v) != x) {
                        if (bad_inv++ == 0) first = x.str();
                    }
                    if (derive(model, sigma(model, x, i), i, v) != sigma(model, derive(model, x, i, v), i)) ++bad_comm;
                } catch (const PcrisError& err) {
                    if (bad_inv++ == 0) first = err.what();
                }
            }
            Json pv = params;
            pv["variant"] = to_string(v);
            out.push_back(tally("calculus.right_inverse", "d o int = id", pv, samples, bad_inv, first));
            out.push_back(tally("calculus.commutes_with_sigma", "d sigma_i = sigma_i d", pv, samples, bad_comm, ""));
        }

        // the invariants2 integral needs a [T_1] factor
        if (i <= s.r) {
            auto e = CheckEntry::make("calculus.domain", "int_i is defined on [T_1]-multiples only", params);
            try {
                integrate(model, PeriodElem::scalar(s, DPPoly::constant(ry, 1)), i, CalculusVariant::invariants2);
                e.detail = "integral of 1 did not raise";
            } catch (const PreconditionError&) {
                e.ok = true;
            }
            out.push_back(std::move(e));
        }
    }
    return out;
}

std::vector<CheckEntry> t_primitive_sweep(const PeriodModel& model, std::uint32_t max_k) {
    const auto& s = model.shape();
    const DPRing& ring = model.module_ring(Chart::X);
    const auto pool = enumerate_exponents(s);
    std::vector<CheckEntry> out;
    {
        auto e = CheckEntry::make("t_primitive.unit", "f = log(1+X_i) for mu = 1", {{"i", 2}});
        const auto res = t_primitive(model, PeriodElem::scalar(s, DPPoly::constant(ring, 1)), 2);
        const DPPoly expect = log_unit(DPPoly::constant(ring, 1) + DPPoly::variable(ring, var::dir(2)));
        e.ok = res.f == PeriodElem::scalar(s, expect);
        e.witness = serialize(res.f);
        out.push_back(std::move(e));
    }
    for (std::size_t i = 2; i <= s.d + 1; ++i)
        for (std::uint32_t k = 0; k <= max_k; ++k) {
            std::size_t bad = 0, exact = 0, truncated = 0;
            std::string first;
            Mono mo{};
            mo[var::dir(i)] = static_cast<std::uint16_t>(k);
            const DPPoly xk = DPPoly::monomial(ring, mo);
            for (const auto& e : pool) {
                try {
                    const auto res = t_primitive(model, PeriodElem::monomial(s, e, xk), i);
                    (res.mode == "exact" ? exact : truncated) += 1;
                } catch (const PcrisError& err) {
                    if (bad++ == 0) first = exponent_str(s, e) + ": " + err.what();
                }
            }
            auto entry = tally("t_primitive.sweep", "(sigma_i - 1) f = t mu for mu = [T]^e X_i^[k]",
                               {{"i", i}, {"k", k}, {"numerator_bound", s.N}, {"c", to_string(s.c)}}, pool.size(), bad, first);
            entry.witness["exact"] = exact;
            entry.witness["cap_truncated"] = truncated;
            entry.mode = truncated ? "cap-truncated" : "exact";
            out.push_back(std::move(entry));
        }
    return out;
}

std::vector<CheckEntry> koszul_checks(const TruncatedModule& M) {
    const auto& model = M.model();
    const auto& P = model.params();
    std::vector<CheckEntry> out;
    for (const auto& b : M.blocks()) {
        const Json params = {{"character", b.character}, {"deg_z", b.D_z}, {"deg_x", b.D_x}};
        auto e = CheckEntry::make("koszul.complex", "commuting sigma_i - 1 assemble to a complex (d o d = 0)", params);
        e.mode = "quotient-level";
        bool commute = true;
        for (std::size_t i = 0; i < b.sigma_minus_one.size(); ++i)
            for (std::size_t j = i + 1; j < b.sigma_minus_one.size(); ++j)
                commute = commute && b.sigma_minus_one[i] * b.sigma_minus_one[j] == b.sigma_minus_one[j] * b.sigma_minus_one[i];
        const KoszulComplex K = koszul(b.sigma_minus_one, P);
        const bool square = koszul_square_zero(K);

        bool snf_ok = true;
        for (const auto& D : K.d) {
            const SmithForm S = snf_local(D, true);
            ModMatrix diag(D.rows(), D.cols(), P);
            const ModVec dg = S.diagonal();
            for (std::size_t k = 0; k < dg.size(); ++k) diag(k, k) = dg[k];
            snf_ok = snf_ok && S.U * D * S.V == diag && S.V * S.Vinv == ModMatrix::identity(D.cols(), P);
        }
        const Cohomology H = koszul_cohomology(K, P);
        e.ok = commute && square && snf_ok;
        e.witness = {{"dim", b.dim()},      {"multiplicity", b.multiplicity}, {"commuting", commute},
                     {"square_zero", square}, {"snf_verified", snf_ok},      {"divisors", H.divisors},
                     {"h0_generators", H.h0_basis.size()}};
        out.push_back(std::move(e));
    }
    for (std::size_t i = 2; i <= model.desc().d + 1; ++i)
        for (auto& e : h0_invariants(M, i)) out.push_back(std::move(e));
    return out;
}

std::vector<CheckEntry> lattice_kernels(std::uint32_t p, std::uint32_t r) {
    std::vector<CheckEntry> out;
    auto basis_json = [](const std::vector<std::vector<PadicExponent>>& B) {
        Json j = Json::array();
        for (const auto& v : B) {
            Json row = Json::array();
            for (const auto& x : v) row.push_back(x.str());
            j.push_back(row);
        }
        return j;
    };
    auto padic_int = [&](std::int64_t v) { return PadicExponent::integer(v, p); };
    {
        auto e = CheckEntry::make("lattice.kernel_log_point", "L = ker(P(M)^gp + L(u)^gp -> M^gp) consists of pairs (m,-m)",
                                  {{"p", p}});
        const MonoidChart Q{ChartKind::padic_group, 1, 1, p};
        const MonoidChart Zc{ChartKind::free_group, 1, 0, p};
        const auto B = kernel_L({Q, Zc}, Q, {{1, 1}}, 0);
        e.ok = B == std::vector<std::vector<PadicExponent>>{{padic_int(1), padic_int(-1)}};
        e.witness = {{"basis", basis_json(B)}};
        out.push_back(std::move(e));
    }
    {
        auto e = CheckEntry::make("lattice.kernel_dp_algebra",
                                  "L = ker(Z[1/p]^r + Z^r -> Z[1/p]^r) consists of the tuples ((-n_i), (n_i))", {{"p", p}, {"r", r}});
        const MonoidChart Q{ChartKind::padic_group, r, 1, p};
        const MonoidChart Zc{ChartKind::free_group, r, 0, p};
        std::vector<std::vector<std::int64_t>> map(r, std::vector<std::int64_t>(2 * r, 0));
        for (std::uint32_t i = 0; i < r; ++i) map[i][i] = map[i][r + i] = 1;
        const auto B = kernel_L({Q, Zc}, Q, map);
        std::vector<std::vector<PadicExponent>> expect;
        for (std::uint32_t i = 0; i < r; ++i) {
            std::vector<PadicExponent> v(2 * r, padic_int(0));
            v[i] = padic_int(-1);
            v[r + i] = padic_int(1);
            expect.push_back(v);
        }
        e.ok = B == expect;
        e.witness = {{"basis", basis_json(B)}};
        out.push_back(std::move(e));
    }
    {
        auto e = CheckEntry::make("lattice.kernel_identity", "the identity map has trivial kernel", {{"p", p}});
        const MonoidChart Zc{ChartKind::free_group, 2, 0, p};
        const auto B = kernel_L({Zc}, Zc, {{1, 0}, {0, 1}});
        e.ok = B.empty();
        e.witness = {{"basis", basis_json(B)}};
        out.push_back(std::move(e));
    }
    return out;
}

// ---- configuration and dispatch ----

PeriodModelDesc RunConfig::model_desc() const {
    if (n < 1) throw PreconditionError("n must be >= 1");
    if (!is_prime(p)) throw PreconditionError("p = " + std::to_string(p) + " is not prime");
    PeriodModelDesc desc;
    try {
        desc = PeriodModelDesc::defaults(p, n, m);
    } catch (const std::invalid_argument& e) {
        throw PreconditionError(e.what());
    }
    desc.d = d;
    desc.r = r;
    desc.c = c;
    if (D_z) desc.D_z = *D_z;
    if (D_x) desc.D_x = *D_x;
    if (numerator_bound) desc.N = *numerator_bound;
    desc.validate();
    return desc;
}

void RunConfig::validate() const {
    model_desc();
    if (suites.empty()) throw PreconditionError("no suites selected");
    const auto& names = suite_names();
    for (const auto& s : suites)
        if (std::find(names.begin(), names.end(), s) == names.end()) throw PreconditionError("unknown suite '" + s + "'");
    if (n > 3 && std::find(suites.begin(), suites.end(), "witt-laws") != suites.end())
        throw PreconditionError("witt-laws supports n <= 3");
}

nlohmann::json RunConfig::to_json() const {
    Json j = model_desc().to_json();
    j["seed"] = seed;
    // run order is sorted, so the echo is too
    std::set<std::string> sorted(suites.begin(), suites.end());
    j["suites"] = std::vector<std::string>(sorted.begin(), sorted.end());
    return j;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"witt-laws", "dp-laws",        "constants", "eigen",  "integration",
                                                   "t-primitive", "koszul", "t-annihilation", "kummer", "lattice-L"};
    return names;
}

std::vector<CheckEntry> run_suite(const std::string& name, const RunConfig& cfg) {
    const PeriodModelDesc desc = cfg.model_desc();
    const std::uint64_t seed = cfg.seed;
    if (name == "witt-laws") return witt_laws(cfg.p, cfg.n, seed);
    if (name == "dp-laws") return dp_laws(cfg.p, cfg.n, seed);
    if (name == "lattice-L") return lattice_kernels(cfg.p, std::max<std::uint32_t>(cfg.r, 1));

    if (name == "t-primitive") {
        PeriodModelDesc wide = desc;
        wide.N = cfg.numerator_bound.value_or(static_cast<std::int64_t>(cfg.p) * cfg.p);
        return t_primitive_sweep(PeriodModel(wide));
    }
    const PeriodModel model(desc);
    if (name == "constants") {
        ConstantsOptions opt;
        if (cfg.numerator_bound) opt.frac_numerator_max = *cfg.numerator_bound;
        return verify_constants(model, opt);
    }
    if (name == "eigen") return eigen_checks(model, seed);
    if (name == "integration") {
        std::vector<CheckEntry> out = calculus_checks(model, seed);
        for (std::size_t i = 2; i <= desc.r; ++i)
            for (auto& e : integration_identities(model, i, 6)) out.push_back(std::move(e));
        return out;
    }
    if (name == "kummer") {
        std::vector<CheckEntry> out;
        for (std::size_t i = 2; i <= desc.d + 1; ++i)
            for (auto& e : kummer_check(model, i)) out.push_back(std::move(e));
        return out;
    }
    if (name == "koszul" || name == "t-annihilation") {
        const TruncatedModule M(model, desc.D_z, desc.D_x);
        return name == "koszul" ? koszul_checks(M) : t_annihilation_suite(M);
    }
    throw PreconditionError("unknown suite '" + name + "'");
}

Report run_report(const RunConfig& cfg, unsigned jobs) {
    cfg.validate();
    auto run_one = [&cfg](const std::string& name) {
        Json entries = Json::array();
        std::size_t passed = 0, failed = 0;
        std::string error;
        try {
            for (const auto& e : run_suite(name, cfg)) {
                (e.ok ? passed : failed) += 1;
                entries.push_back(e.to_json());
            }
        } catch (const std::exception& ex) {
            error = ex.what();
            ++failed;
        }
        Json j = {{"entries", entries}, {"passed", passed}, {"failed", failed}};
        if (!error.empty()) j["error"] = error;
        return j;
    };
    std::vector<std::string> names = cfg.suites;
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());

    std::map<std::string, Json> results;
    if (jobs > 1) {
        std::vector<std::future<Json>> futs;
        for (const auto& n : names) futs.push_back(std::async(std::launch::async, run_one, n));
        for (std::size_t k = 0; k < names.size(); ++k) results[names[k]] = futs[k].get();
    } else {
        for (const auto& n : names) results[n] = run_one(n);
    }

    Report rep;
    Json suites = Json::object();
    for (auto& [n, j] : results) {
        rep.ok = rep.ok && j["failed"] == 0;
        suites[n] = std::move(j);
    }
    rep.json = {{"schema_version", kReportSchemaVersion},
                {"config", cfg.to_json()},
                {"suites", suites},
                {"status", rep.ok ? "pass" : "fail"}};
    return rep;
}

}  // namespace pcris
