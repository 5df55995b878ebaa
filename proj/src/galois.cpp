#include "pcris/galois.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace pcris {

namespace {

void check_direction(const PeriodModel& model, std::size_t i) {
    if (i < 2 || i > model.desc().d + 1)
        throw PreconditionError("direction " + std::to_string(i) + " outside 2.." + std::to_string(model.desc().d + 1));
}

DPPoly x_mono(const DPRing& ring, std::size_t v, std::uint32_t k) {
    Mono m{};
    m[v] = static_cast<std::uint16_t>(k);
    return DPPoly::monomial(ring, m);
}

// coefficient of V^[j] (as a V-free polynomial)
DPPoly v_coefficient(const DPPoly& x, std::size_t v, std::uint32_t j) {
    std::vector<DPPoly::Term> out;
    for (const auto& [m, c] : x.terms()) {
        if (m[v] != j) continue;
        Mono mm = m;
        mm[v] = 0;
        out.push_back({mm, c});
    }
    return DPPoly::from_terms(x.ring(), std::move(out));
}

// V^[j] -> sum_{k>=1} (-1)^k ((j+k-1)!/j!) V^[j+k]; a right inverse of -(1+V) d/dV
DPPoly integrate_vanishing(const DPPoly& x, std::size_t v) {
    const auto& P = x.params();
    std::vector<DPPoly::Term> out;
    for (const auto& [m, c] : x.terms()) {
        const std::uint32_t j = m[v];
        std::uint64_t prod = 1 % P.modulus();  // (j+1)...(j+k-1)
        for (std::uint32_t k = 1;; ++k) {
            if (k > 1) prod = P.mul(prod, (j + k - 1) % P.modulus());
            if (prod == 0) break;
            Mono mm = m;
            mm[v] = static_cast<std::uint16_t>(j + k);
            out.push_back({mm, P.mul(c, k % 2 ? P.neg(prod) : prod)});
        }
    }
    return DPPoly::from_terms(x.ring(), std::move(out));
}

ExponentVec unit_coord(const LatticeShape& s, std::size_t coord, std::int64_t times = 1) {
    return unit_exponent(s, coord, times * s.denom());
}

ExponentVec scaled_exponent(const ExponentVec& e, std::int64_t k) {
    ExponentVec r = e;
    for (auto& v : r.num) v *= k;
    return r;
}

ExponentVec sum_exponents(const ExponentVec& a, const ExponentVec& b) {
    ExponentVec r = a;
    for (std::size_t i = 0; i < r.num.size(); ++i) r.num[i] += b.num[i];
    return r;
}

}  // namespace

DPPoly sigma_coeff(const PeriodModel& model, const DPPoly& c, std::size_t i, bool inverse) {
    check_direction(model, i);
    const DPRing& ring = c.ring();
    const std::size_t v = var::dir(i);
    if (v >= ring->nvars()) throw PreconditionError("sigma_coeff: ring has no variable for direction " + std::to_string(i));
    const Chart chart = model.chart_of(ring);
    const std::string key = "sigma|" + std::to_string(i) + (inverse ? "|inv|" : "|") + ring->describe();
    const auto& sub = model.substitution(key, [&] {
        const auto& B = model.base(ring);
        // X_i -> q(1+X_i) - 1; Y_i = (1+X_i)^{-1} - 1 -> q^{-1}(1+Y_i) - 1
        const bool use_q = (chart == Chart::X) != inverse;
        const DPPoly& f = use_q ? B.q : B.qinv;
        std::vector<DPPoly> images;
        for (std::size_t w = 0; w < ring->nvars(); ++w) images.push_back(DPPoly::variable(ring, w));
        images[v] = f * (B.one + images[v]) - B.one;
        return std::make_unique<DPSubstitution>(ring, ring, images);
    });
    return sub(c);
}

static PeriodElem sigma_impl(const PeriodModel& model, const PeriodElem& x, std::size_t i, bool inverse) {
    PeriodElem r(x.shape(), x.ring());
    for (const auto& [e, c] : x.terms()) {
        PadicExponent beta = character(x.shape(), e, i);
        if (inverse) beta = -beta;
        r.add_term(e, model.q_power(beta, x.ring()) * sigma_coeff(model, c, i, inverse));
    }
    return r;
}

PeriodElem sigma(const PeriodModel& model, const PeriodElem& x, std::size_t i) { return sigma_impl(model, x, i, false); }

PeriodElem sigma_inverse(const PeriodModel& model, const PeriodElem& x, std::size_t i) {
    return sigma_impl(model, x, i, true);
}

PeriodElem sigma_minus_one(const PeriodModel& model, const PeriodElem& x, std::size_t i) {
    return sigma(model, x, i) - x;
}

PeriodElem to_chart(const PeriodModel& model, const PeriodElem& x, Chart target) {
    const DPRing& src = x.ring();
    if (model.chart_of(src) == target) return x;
    DPRing dst = model.module_ring(target)->with_caps(src->caps(), src->total_cap());
    const auto& sub = model.substitution("chart|" + src->describe() + "|" + dst->describe(), [&] {
        std::vector<DPPoly> images;
        for (std::size_t w = 0; w < src->nvars(); ++w) {
            if (w < var::U) images.push_back(DPPoly::variable(dst, w));
            else images.push_back(binomial_power(dst, w, -1) - DPPoly::constant(dst, 1));
        }
        return std::make_unique<DPSubstitution>(src, dst, images);
    });
    PeriodElem r(x.shape(), dst);
    for (const auto& [e, c] : x.terms()) r.add_term(e, sub(c));
    return r;
}

std::string to_string(CalculusVariant v) {
    switch (v) {
        case CalculusVariant::vanishing: return "vanishing";
        case CalculusVariant::invariants2: return "invariants2";
        case CalculusVariant::torus: return "torus";
    }
    return "?";
}

static void check_variant(const PeriodModel& model, const PeriodElem& x, std::size_t i, CalculusVariant v) {
    check_direction(model, i);
    const Chart want = v == CalculusVariant::vanishing ? Chart::X : Chart::Y;
    if (model.chart_of(x.ring()) != want)
        throw PreconditionError(to_string(v) + " calculus works in the " + (want == Chart::X ? "X" : "Y") + " chart");
    if (v == CalculusVariant::invariants2 && i > model.desc().r)
        throw PreconditionError("invariants2 calculus needs 2 <= i <= r");
    if (v == CalculusVariant::torus && i <= model.desc().r)
        throw PreconditionError("torus calculus needs an invertible T_i (i > r)");
}

PeriodElem derive(const PeriodModel& model, const PeriodElem& x, std::size_t i, CalculusVariant v) {
    check_variant(model, x, i, v);
    const std::size_t w = var::dir(i);
    const auto& s = x.shape();
    PeriodElem r(s, x.ring());
    for (const auto& [e, c] : x.terms()) {
        DPPoly dc = dp_derivative(c, w);
        switch (v) {
            case CalculusVariant::vanishing:
                r.add_term(e, -(DPPoly::constant(x.ring(), 1) + DPPoly::variable(x.ring(), w)) * dc);
                break;
            case CalculusVariant::invariants2:
                r.add_term(add_exponents(s, e, unit_coord(s, 0)), dc);
                break;
            case CalculusVariant::torus:
                r.add_term(add_exponents(s, e, unit_coord(s, i - 1, -1)), dc);
                break;
        }
    }
    return r;
}

PeriodElem integrate(const PeriodModel& model, const PeriodElem& x, std::size_t i, CalculusVariant v) {
    check_variant(model, x, i, v);
    const std::size_t w = var::dir(i);
    const auto& s = x.shape();
    PeriodElem r(s, x.ring());
    for (const auto& [e, c] : x.terms()) {
        switch (v) {
            case CalculusVariant::vanishing:
                r.add_term(e, integrate_vanishing(c, w));
                break;
            case CalculusVariant::invariants2: {
                ExponentVec f;
                try {
                    f = add_exponents(s, e, unit_coord(s, 0, -1));
                } catch (const PreconditionError&) {
                    throw PreconditionError("integrate: " + exponent_str(s, e) + " is not a [T_1]-multiple");
                }
                r.add_term(f, dp_antiderivative(c, w));
                break;
            }
            case CalculusVariant::torus:
                r.add_term(add_exponents(s, e, unit_coord(s, i - 1)), dp_antiderivative(c, w));
                break;
        }
    }
    return r;
}

std::uint32_t integral_length(const RingParams& P, std::uint32_t j) {
    std::uint64_t prod = 1 % P.modulus();
    std::uint32_t k = 1;
    for (;; ++k) {
        if (k > 1) prod = P.mul(prod, (j + k - 1) % P.modulus());
        if (prod == 0) return k - 1;
    }
}

// ---- t-primitives ----

namespace {

class Primitives {
public:
    Primitives(const PeriodModel& model, DPRing ring, std::size_t i)
        : model_(model), ring_(std::move(ring)), v_(var::dir(i)), B_(model.base(ring_)) {}

    // g with q^beta sigma(g) - g = t X^[k]
    DPPoly get(const PadicExponent& beta, std::uint32_t k) {
        if (beta.is_zero()) return zero_case(k);
        if (beta.is_integer()) return integer_case(beta.numerator(), k);
        return fractional_case(beta, k);
    }

private:
    DPPoly X(std::uint32_t k) const { return x_mono(ring_, v_, k); }

    DPPoly zero_case(std::uint32_t n) {
        auto key = std::make_pair(std::int64_t{0}, n);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        DPPoly g;
        if (n == 0) {
            g = log_unit(B_.one + X(1));
        } else {
            DPPoly lower(ring_);
            for (std::uint32_t r = 0; r < n; ++r) lower += model_.h(n - r, ring_) * zero_case(r);
            const PadicExponent nn = PadicExponent::integer(n, ring_->params().p());
            // (sigma - 1) gn = n t X^[n]
            DPPoly gn = model_.u_alpha_inverse(n, ring_) * (X(n) - model_.q_power(nn, ring_) * lower);
            // (sigma - 1) m = t d(X^[n]) with d = -(1+X) d/dX
            DPPoly m = -(zero_case(n - 1) + gn);
            DPPoly m1 = integrate_vanishing(m, v_);
            // constant-in-X defect of (sigma - 1) m1 - t X^[n] is t S
            DPPoly S(ring_);
            const std::uint32_t top = m1.max_degree_in(v_);
            for (std::uint32_t j = 1; j <= top; ++j) {
                DPPoly cj = v_coefficient(m1, v_, j);
                if (cj.is_zero()) continue;
                S += cj * model_.q_power(PadicExponent::integer(j, ring_->params().p()), ring_) * model_.h(j, ring_);
            }
            g = m1 - v_coefficient(m1, v_, 0) - S * zero_case(0);
        }
        return memo_.emplace(key, g).first->second;
    }

    DPPoly integer_case(std::int64_t beta, std::uint32_t k) {
        const auto& P = ring_->params();
        auto key = std::make_pair(beta * 1000003, k);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        DPPoly g;
        if (k == 0) {
            // u_beta^{-1} (1 - (1+X)^{-beta}) / beta, written with ((1+X)^beta - 1)/beta
            std::vector<DPPoly::Term> terms;
            std::uint64_t ff = 1 % P.modulus();
            for (std::uint32_t r = 1;; ++r) {
                if (r > 1) ff = P.mul(ff, P.reduce(beta - 1 - static_cast<std::int64_t>(r - 2)));
                if (ff == 0) break;
                Mono m{};
                m[v_] = static_cast<std::uint16_t>(r);
                terms.push_back({m, ff});
            }
            DPPoly pb = DPPoly::from_terms(ring_, std::move(terms));
            g = model_.u_alpha_inverse(beta, ring_) * binomial_power(ring_, v_, -beta) * pb;
        } else {
            // [T]^e (1+X)^{-beta} is invariant; expand (1+X)^beta X^[k] and use the beta = 0 primitives
            DPPoly expansion = binomial_power(ring_, v_, beta) * X(k);
            DPPoly acc(ring_);
            for (const auto& [m, c] : expansion.terms()) acc += zero_case(m[v_]).scaled(c);
            g = binomial_power(ring_, v_, -beta) * acc;
        }
        return memo_.emplace(key, g).first->second;
    }

    DPPoly fractional_case(const PadicExponent& beta, std::uint32_t n) {
        const std::uint32_t m = model_.desc().m;
        auto key = std::make_pair(beta.scaled(m) * 1000003 + 1, n);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        const auto& P = ring_->params();
        const PadicExponent gamma = beta + PadicExponent::integer(n, P.p());
        const auto& fc = model_.fractional_cofactor(gamma, ring_);
        const DPPoly qg = model_.q_power(gamma, ring_);
        if ((qg - B_.one) * fc.value != B_.t)
            throw DivisionObstruction("cofactor for t/(q^" + gamma.str() + " - 1) fails its re-multiplication");
        DPPoly lower(ring_);
        for (std::uint32_t r = 0; r < n; ++r) lower += model_.h(n - r, ring_) * fractional_case(beta, r);
        DPPoly g = fc.value * X(n) - fc.value * qg * lower;
        return memo_.emplace(key, g).first->second;
    }

    const PeriodModel& model_;
    DPRing ring_;
    std::size_t v_;
    const BaseElems& B_;
    std::map<std::pair<std::int64_t, std::uint32_t>, DPPoly> memo_;
};

}  // namespace

PrimitiveResult t_primitive(const PeriodModel& model, const PeriodElem& mu, std::size_t i, std::uint32_t cap_z) {
    check_direction(model, i);
    if (model.chart_of(mu.ring()) != Chart::X) throw PreconditionError("t_primitive works in the X chart");
    if (cap_z == 0) cap_z = model.desc().D_z;
    DPRing ring = mu.ring();
    bool fractional = false;
    for (const auto& [e, c] : mu.terms())
        if (!character(mu.shape(), e, i).is_integer()) fractional = true;
    if (fractional && !ring->cap(var::Z)) ring = model.z_capped(ring, cap_z);
    const bool capped = ring->cap(var::Z).has_value();
    const PeriodElem target = mu.in_ring(ring);

    Primitives prim(model, ring, i);
    const std::size_t v = var::dir(i);
    PeriodElem f(mu.shape(), ring);
    for (const auto& [e, c] : target.terms()) {
        const PadicExponent beta = character(mu.shape(), e, i);
        const std::uint32_t top = c.max_degree_in(v);
        for (std::uint32_t k = 0; k <= top; ++k) {
            DPPoly y = v_coefficient(c, v, k);  // sigma_i-invariant
            if (y.is_zero()) continue;
            f.add_term(e, y * prim.get(beta, k));
        }
    }
    const auto& B = model.base(ring);
    if (sigma_minus_one(model, f, i) != target.scaled(B.t))
        throw VerificationFailure("(sigma_" + std::to_string(i) + " - 1) f != t mu for mu = " + mu.str());
    return {f, capped ? "cap-truncated" : "exact"};
}

// ---- identities ----

std::vector<CheckEntry> integration_identities(const PeriodModel& model0, std::size_t i, std::uint32_t n_max) {
    check_direction(model0, i);
    if (i > model0.desc().r) throw PreconditionError("integration identities need 2 <= i <= r");
    PeriodModelDesc desc = model0.desc();
    const std::int64_t pm = model0.shape().denom();
    desc.N = std::max<std::int64_t>(desc.N, (2 * static_cast<std::int64_t>(n_max) + 3) * pm);
    PeriodModel model(desc);
    const LatticeShape& s = model.shape();
    const DPRing& ring = model.module_ring(Chart::Y);
    const auto& B = model.base(ring);
    const std::size_t r = desc.r;
    const nlohmann::json params = {{"p", desc.params.p()}, {"n", desc.params.n()}, {"m", desc.m},
                                   {"d", desc.d},          {"r", r},               {"c", to_string(desc.c)},
                                   {"i", i}};
    std::vector<CheckEntry> out;

    for (std::uint32_t n = 0; n <= n_max; ++n) {
        auto e = CheckEntry::make("integration.first", "(sigma_i - 1) int_i [T_1 T_i] T_i^n = -t u_{n+1} [T_i]^{n+1}", params);
        e.parameters["n"] = n;
        try {
            ExponentVec ex = sum_exponents(unit_coord(s, 0), unit_coord(s, i - 1, n + 1));
            PeriodElem x = PeriodElem::monomial(s, ex, binomial_power(ring, var::dir(i), n));
            PeriodElem lhs = sigma_minus_one(model, integrate(model, x, i, CalculusVariant::invariants2), i);
            PeriodElem rhs = PeriodElem::monomial(s, unit_coord(s, i - 1, n + 1), -(B.t * model.u_alpha(n + 1, ring)));
            e.ok = lhs == rhs;
            e.witness = serialize(rhs);
            if (!e.ok) e.detail = "lhs = " + lhs.str();
        } catch (const PcrisError& err) {
            e.detail = err.what();
        }
        out.push_back(std::move(e));
    }

    // c-monomial prod_{j<=r} [T_j], sigma-invariant
    ExponentVec cbar = zero_exponent(s);
    for (std::size_t j = 0; j < r; ++j) cbar.num[j] = pm;
    for (std::uint32_t n = 2; n <= n_max; ++n) {
        auto e = CheckEntry::make("integration.second",
                                  "(sigma_i - 1) int_i T_1^n = -t u_{1-n} [T_1]^{n-1} (c-part)^n prod_{j != i} (1+Y_j)^{-n}",
                                  params);
        e.parameters["n"] = n;
        try {
            const std::int64_t nn = n;
            DPPoly others = B.one;
            for (std::size_t j = 2; j <= r; ++j)
                if (j != i) others = others * binomial_power(ring, var::dir(j), -nn);
            DPPoly coeff = others * binomial_power(ring, var::dir(i), -nn);
            ExponentVec ex = unit_coord(s, 0, nn);
            ExponentVec ex_rhs = unit_coord(s, 0, nn - 1);
            DPPoly rhs_coeff = -(B.t * model.u_alpha(1 - nn, ring)) * others;
            if (desc.c == CMode::pi) {
                coeff = coeff * binomial_power(ring, var::U, nn);
                rhs_coeff = rhs_coeff * binomial_power(ring, var::U, nn);
            } else {
                ex = sum_exponents(ex, scaled_exponent(cbar, nn));
                ex_rhs = sum_exponents(ex_rhs, scaled_exponent(cbar, nn));
            }
            PeriodElem x = PeriodElem::monomial(s, ex, coeff);
            PeriodElem lhs = sigma_minus_one(model, integrate(model, x, i, CalculusVariant::invariants2), i);
            PeriodElem rhs = PeriodElem::monomial(s, ex_rhs, rhs_coeff);
            e.ok = lhs == rhs;
            e.witness = serialize(rhs);
            if (!e.ok) e.detail = "lhs = " + lhs.str();
        } catch (const PcrisError& err) {
            e.detail = err.what();
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<PeriodElem> nabla(const PeriodModel& model, const PeriodElem& x) {
    if (model.chart_of(x.ring()) != Chart::X) throw PreconditionError("nabla works in the X chart");
    std::vector<PeriodElem> out;
    const DPPoly one = DPPoly::constant(x.ring(), 1);
    auto component = [&](std::size_t w) {
        const DPPoly f = -(one + DPPoly::variable(x.ring(), w));
        return x.map_coeffs([&](const ExponentVec&, const DPPoly& c) { return f * dp_derivative(c, w); });
    };
    for (std::size_t i = 2; i <= model.desc().d + 1; ++i) out.push_back(component(var::dir(i)));
    out.push_back(component(var::U));
    return out;
}

std::vector<CheckEntry> kummer_check(const PeriodModel& model, std::size_t i) {
    check_direction(model, i);
    const auto& s = model.shape();
    const DPRing& ring = model.module_ring(Chart::X);
    const auto& B = model.base(ring);
    const nlohmann::json params = {{"p", model.params().p()}, {"n", model.params().n()}, {"m", model.desc().m},
                                   {"d", model.desc().d},     {"c", to_string(s.c)},     {"i", i}};
    // g = log((1+X_i)^{-1})
    const PeriodElem g = PeriodElem::scalar(s, -log_unit(B.one + DPPoly::variable(ring, var::dir(i))));
    std::vector<CheckEntry> out;
    bool all = true;
    for (std::size_t j = 2; j <= model.desc().d + 1; ++j) {
        auto e = CheckEntry::make("kummer.galois", "(sigma_j - 1)(-log(1+X_i)) = -t delta_ij", params);
        e.parameters["j"] = j;
        PeriodElem lhs = sigma_minus_one(model, g, j);
        PeriodElem rhs = j == i ? PeriodElem::scalar(s, -B.t) : PeriodElem(s, ring);
        e.ok = lhs == rhs;
        e.witness = serialize(lhs);
        all = all && e.ok;
        out.push_back(std::move(e));
    }
    {
        auto e = CheckEntry::make("kummer.derham", "nabla(-log(1+X_i)) = dlog T_i", params);
        auto comps = nabla(model, g);
        bool ok = true;
        for (std::size_t c = 0; c < comps.size(); ++c) {
            const bool is_i = c + 2 == i;
            ok = ok && (is_i ? comps[c] == PeriodElem::scalar(s, B.one) : comps[c].is_zero());
        }
        e.ok = ok;
        e.witness = {{"components", comps.size()}, {"dlog_index", i - 2}};
        all = all && ok;
        out.push_back(std::move(e));
    }
    auto e = CheckEntry::make("kummer.comparison", "dlog T_i and -t e_i share the preimage -log(1+X_i)", params);
    e.ok = all;
    e.witness = serialize(g);
    out.push_back(std::move(e));
    return out;
}

// ---- truncated modules ----

std::size_t ModuleBlock::index(std::uint32_t a, const std::vector<std::uint32_t>& k) const {
    std::size_t idx = 0;
    for (std::size_t j = k.size(); j-- > 0;) idx = idx * (D_x + 1) + k[j];
    return idx * (D_z + 1) + a;
}

std::string ModuleBlock::label(std::size_t idx) const {
    std::ostringstream os;
    os << "z=" << idx % (D_z + 1) << ",k=(";
    idx /= (D_z + 1);
    for (std::size_t j = 0; j < character.size(); ++j) {
        if (j) os << ",";
        os << idx % (D_x + 1);
        idx /= (D_x + 1);
    }
    os << ")";
    return os.str();
}

TruncatedModule::TruncatedModule(const PeriodModel& model, std::uint32_t D_z, std::uint32_t D_x)
    : model_(&model), D_z_(D_z), D_x_(D_x) {
    std::map<std::vector<std::int64_t>, std::pair<std::uint64_t, ExponentVec>> chars;
    for (const auto& e : enumerate_exponents(model.shape())) {
        auto [it, inserted] = chars.emplace(character_vector(model.shape(), e), std::make_pair(0, e));
        ++it->second.first;
    }
    for (const auto& [ch, info] : chars) {
        ModuleBlock b = make_block(ch, D_z, D_x);
        b.multiplicity = info.first;
        b.representative = info.second;
        blocks_.push_back(std::move(b));
    }
}

std::uint64_t TruncatedModule::total_dim() const {
    std::uint64_t s = 0;
    for (const auto& b : blocks_) s += b.multiplicity * b.dim();
    return s;
}

ModuleBlock TruncatedModule::make_block(const std::vector<std::int64_t>& ch, std::uint32_t D_z, std::uint32_t D_x) const {
    const PeriodModel& model = *model_;
    const std::size_t d = model.desc().d;
    if (ch.size() != d) throw PreconditionError("character has wrong length");
    ModuleBlock b;
    b.character = ch;
    b.D_z = D_z;
    b.D_x = D_x;
    const DPRing ring = model.z_capped(model.module_ring(Chart::X), D_z);
    const auto& P = model.params();
    std::size_t dim = D_z + 1;
    for (std::size_t j = 0; j < d; ++j) dim *= D_x + 1;
    for (std::size_t j = 0; j < d; ++j) b.sigma_minus_one.emplace_back(dim, dim, P);
    b.t_mult = ModMatrix(dim, dim, P);
    const auto& B = model.base(ring);

    auto write = [&](ModMatrix& mat, std::size_t col, const DPPoly& img) {
        for (const auto& [m, c] : img.terms()) {
            if (m[var::Xi] || m[var::U]) throw PcrisError("truncated module: image leaves the block");
            std::vector<std::uint32_t> k(d);
            for (std::size_t j = 0; j < d; ++j) {
                k[j] = m[var::dir(j + 2)];
                if (k[j] > D_x) throw PcrisError("truncated module: X-degree is not preserved");
            }
            mat(b.index(m[var::Z], k), col) = P.add(mat(b.index(m[var::Z], k), col), c);
        }
    };
    std::vector<DPPoly> qb;
    for (std::size_t j = 0; j < d; ++j) qb.push_back(model.q_power(PadicExponent(ch[j], model.desc().m, P.p()), ring));

    for (std::size_t idx = 0; idx < dim; ++idx) {
        Mono m{};
        std::size_t rest = idx / (D_z + 1);
        m[var::Z] = static_cast<std::uint16_t>(idx % (D_z + 1));
        for (std::size_t j = 0; j < d; ++j) {
            m[var::dir(j + 2)] = static_cast<std::uint16_t>(rest % (D_x + 1));
            rest /= D_x + 1;
        }
        const DPPoly x = DPPoly::monomial(ring, m);
        for (std::size_t j = 0; j < d; ++j) write(b.sigma_minus_one[j], idx, qb[j] * sigma_coeff(model, x, j + 2) - x);
        write(b.t_mult, idx, B.t * x);
    }
    return b;
}

std::string TruncatedModule::export_text() const {
    std::ostringstream os;
    for (const auto& b : blocks_) {
        os << "# block character=(";
        for (std::size_t j = 0; j < b.character.size(); ++j) os << (j ? "," : "") << b.character[j];
        os << ")/p^" << model_->desc().m << " multiplicity=" << b.multiplicity << " dim=" << b.dim() << "\n";
        for (std::size_t j = 0; j < b.sigma_minus_one.size(); ++j)
            os << "## sigma_" << j + 2 << " - 1\n" << b.sigma_minus_one[j].coordinate_text();
        os << "## t\n" << b.t_mult.coordinate_text();
    }
    return os.str();
}

std::size_t KoszulComplex::rank(std::size_t j) const {
    const std::size_t end = j + 1 < offsets.size() ? offsets[j + 1] : subsets.size();
    return end - offsets[j];
}

KoszulComplex koszul(const std::vector<ModMatrix>& ops, const RingParams& params) {
    KoszulComplex k;
    const unsigned d = static_cast<unsigned>(ops.size());
    k.module_dim = ops.empty() ? 0 : ops[0].rows();
    std::vector<std::vector<unsigned>> all;
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        std::vector<unsigned> s;
        for (unsigned b = 0; b < d; ++b)
            if (mask >> b & 1) s.push_back(b);
        all.push_back(s);
    }
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    k.subsets = all;
    std::map<std::vector<unsigned>, std::size_t> pos;  // index within its size group
    for (std::size_t idx = 0; idx < all.size(); ++idx) {
        if (idx == 0 || all[idx].size() != all[idx - 1].size()) k.offsets.push_back(idx);
        pos[all[idx]] = idx - k.offsets.back();
    }
    const std::size_t md = k.module_dim;
    for (unsigned j = 0; j < d; ++j) {
        ModMatrix dj(k.rank(j + 1) * md, k.rank(j) * md, params);
        for (std::size_t a = k.offsets[j]; a < k.offsets[j] + k.rank(j); ++a) {
            const auto& S = all[a];
            for (unsigned c = 0; c < d; ++c) {
                if (std::find(S.begin(), S.end(), c) != S.end()) continue;
                auto T = S;
                T.insert(std::upper_bound(T.begin(), T.end(), c), c);
                const std::size_t where = std::lower_bound(T.begin(), T.end(), c) - T.begin();
                dj.add_block(pos[T] * md, pos[S] * md, ops[c], where % 2 == 1);
            }
        }
        k.d.push_back(std::move(dj));
    }
    return k;
}

bool koszul_square_zero(const KoszulComplex& k) {
    for (std::size_t j = 0; j + 1 < k.d.size(); ++j)
        if (!(k.d[j + 1] * k.d[j]).is_zero()) return false;
    return true;
}

std::uint64_t Cohomology::log_size(std::size_t j) const {
    std::uint64_t s = 0;
    for (auto g : divisors.at(j)) s += g;
    return s;
}

Cohomology koszul_cohomology(const KoszulComplex& k, const RingParams& params) {
    Cohomology h;
    const std::size_t d = k.d.size();
    for (std::size_t j = 0; j <= d; ++j) {
        ModMatrix prev = j > 0 ? k.d[j - 1] : ModMatrix(k.dim(j), 0, params);
        ModMatrix next = j < d ? k.d[j] : ModMatrix(0, k.dim(j), params);
        h.divisors.push_back(homology_divisors(prev, next));
    }
    if (d > 0) {
        h.h0_basis = kernel_generators(snf_local(k.d[0], true));
    } else {
        for (std::size_t c = 0; c < k.module_dim; ++c) {
            ModVec v(k.module_dim, 0);
            v[c] = 1;
            h.h0_basis.push_back(v);
        }
    }
    return h;
}

std::vector<CheckEntry> h0_invariants(const TruncatedModule& M, std::size_t i) {
    const PeriodModel& model = M.model();
    check_direction(model, i);
    const auto& P = model.params();
    std::vector<CheckEntry> out;
    for (const auto& blk : M.blocks()) {
        const ModuleBlock b = M.make_block(blk.character, M.D_z(), 0);  // lattice part only
        const PadicExponent beta(b.character[i - 2], model.desc().m, P.p());
        auto e = CheckEntry::make("h0.invariants", "t (A/p^n)^{sigma_i=1} lies in the sum of p^max(0,n-v_p(a)) F_a, a in Z, v_p(a) > 0",
                                  {{"i", i}, {"beta", beta.str()}, {"deg_z", M.D_z()}});
        e.mode = "quotient-level";
        const auto gens = kernel_generators(snf_local(b.sigma_minus_one[i - 2], true));
        std::uint32_t need = 0;
        bool must_vanish = false;
        if (!beta.is_zero()) {
            if (!beta.is_integer() || beta.vp() <= 0) must_vanish = true;
            else need = static_cast<std::uint32_t>(std::max<std::int64_t>(0, P.n() - beta.vp()));
        }
        bool ok = true;
        nlohmann::json witnesses = nlohmann::json::array();
        for (const auto& k : gens) {
            ModVec tk = b.t_mult.apply(k);
            const bool zero = std::all_of(tk.begin(), tk.end(), [](std::uint64_t v) { return v == 0; });
            std::uint32_t val = P.n();
            for (auto v : tk)
                if (v) val = std::min(val, P.val(v));
            if (must_vanish ? !zero : val < need) ok = false;
            witnesses.push_back({{"t_kappa_valuation", val}, {"zero", zero}});
        }
        e.ok = ok;
        e.witness = {{"kernel_generators", gens.size()}, {"required_valuation", must_vanish ? P.n() : need},
                     {"vectors", witnesses}};
        if (!ok) e.detail = "an invariant violates the divisibility bound";
        out.push_back(std::move(e));
    }
    return out;
}

namespace {

ModVec apply_blockwise(const ModMatrix& t, const ModVec& x, std::size_t md) {
    ModVec out(x.size(), 0);
    for (std::size_t off = 0; off < x.size(); off += md) {
        ModVec part(x.begin() + off, x.begin() + off + md);
        ModVec img = t.apply(part);
        std::copy(img.begin(), img.end(), out.begin() + off);
    }
    return out;
}

}  // namespace

std::vector<CheckEntry> t_annihilation_suite(const TruncatedModule& M, AnnihilationOptions opt) {
    const PeriodModel& model = M.model();
    const auto& P = model.params();
    const std::size_t d = model.desc().d;
    std::vector<CheckEntry> out;
    for (const auto& b : M.blocks()) {
        const KoszulComplex K = koszul(b.sigma_minus_one, P);
        const std::size_t md = b.dim();
        struct Raised {
            ModuleBlock block;
            KoszulComplex K;
            std::vector<std::optional<SmithForm>> snf;
            std::vector<std::vector<std::size_t>> rows;
        };
        std::map<std::uint32_t, Raised> raised;

        for (std::size_t j = 1; j <= d; ++j) {
            auto e = CheckEntry::make("t_annihilation", "t^d kills H^j of the Koszul complex",
                                      {{"character", b.character}, {"degree", j}, {"d", d},
                                       {"deg_z", b.D_z}, {"deg_x", b.D_x}});
            e.mode = "quotient-level";
            const SmithForm prev = snf_local(K.d[j - 1], true);
            std::vector<ModVec> gens;
            if (j < d) {
                gens = kernel_generators(snf_local(K.d[j], true));
            } else {
                for (std::size_t c = 0; c < K.dim(j); ++c) {
                    ModVec v(K.dim(j), 0);
                    v[c] = 1;
                    gens.push_back(v);
                }
            }
            std::size_t exact = 0, artifacts = 0, failures = 0;
            std::uint32_t raise_needed = 0;
            for (const auto& kappa : gens) {
                ModVec target = kappa;
                for (std::size_t s = 0; s < d; ++s) target = apply_blockwise(b.t_mult, target, md);
                auto sol = solve_linear(prev, target);
                if (sol && K.d[j - 1].apply(*sol) == target) {
                    ++exact;
                    continue;
                }
                // raise the caps and solve modulo Z-degree above the original cap
                bool solved = false;
                for (std::uint32_t raise = opt.retry_raise; raise && raise <= opt.max_raise && !solved; raise *= 2) {
                    auto it = raised.find(raise);
                    if (it == raised.end()) {
                        ModuleBlock big = M.make_block(b.character, b.D_z + raise, b.D_x + raise);
                        KoszulComplex bk = koszul(big.sigma_minus_one, P);
                        it = raised.emplace(raise, Raised{std::move(big), std::move(bk), std::vector<std::optional<SmithForm>>(d + 1),
                                                          std::vector<std::vector<std::size_t>>(d + 1)}).first;
                    }
                    Raised& R = it->second;
                    const ModuleBlock& big = R.block;
                    const std::size_t bmd = big.dim();
                    if (!R.snf[j]) {
                        const ModMatrix& D = R.K.d[j - 1];
                        for (std::size_t row = 0; row < D.rows(); ++row)
                            if (big.z_degree(row % bmd) <= b.D_z) R.rows[j].push_back(row);
                        ModMatrix red(R.rows[j].size(), D.cols(), P);
                        for (std::size_t r = 0; r < R.rows[j].size(); ++r)
                            for (std::size_t c = 0; c < D.cols(); ++c) red(r, c) = D(R.rows[j][r], c);
                        R.snf[j] = snf_local(red, true);
                    }
                    ModVec embedded(K.dim(j) / md * bmd, 0);
                    for (std::size_t s = 0; s < K.dim(j) / md; ++s)
                        for (std::size_t idx = 0; idx < md; ++idx) {
                            std::size_t rest = idx / (b.D_z + 1);
                            std::vector<std::uint32_t> k(d);
                            for (std::size_t q = 0; q < d; ++q) {
                                k[q] = static_cast<std::uint32_t>(rest % (b.D_x + 1));
                                rest /= b.D_x + 1;
                            }
                            embedded[s * bmd + big.index(static_cast<std::uint32_t>(idx % (b.D_z + 1)), k)] =
                                target[s * md + idx];
                        }
                    ModVec rhs;
                    for (auto row : R.rows[j]) rhs.push_back(embedded[row]);
                    solved = solve_linear(*R.snf[j], rhs).has_value();
                    if (solved) raise_needed = std::max(raise_needed, raise);
                }
                if (solved) ++artifacts;
                else ++failures;
            }
            e.ok = failures == 0;
            e.witness = {{"classes", gens.size()}, {"exact", exact}, {"truncation_artifacts", artifacts},
                         {"failures", failures}, {"raise_needed", raise_needed}};
            if (failures) e.detail = std::to_string(failures) + " cocycle generators have no t^d-witness even at raised caps";
            out.push_back(std::move(e));
        }

        if (d == 1 && opt.cross_check_primitives) {
            auto e = CheckEntry::make("t_annihilation.primitive", "t mu = (sigma - 1) f for every basis vector",
                                      {{"character", b.character}, {"deg_z", b.D_z}, {"deg_x", b.D_x}});
            const DPRing ring = model.module_ring(Chart::X);
            std::size_t checked = 0;
            std::string mode = "exact";
            try {
                for (std::size_t idx = 0; idx < md; ++idx) {
                    Mono m{};
                    m[var::Z] = static_cast<std::uint16_t>(idx % (b.D_z + 1));
                    m[var::dir(2)] = static_cast<std::uint16_t>(idx / (b.D_z + 1));
                    PeriodElem mu = PeriodElem::monomial(model.shape(), b.representative, DPPoly::monomial(ring, m));
                    auto res = t_primitive(model, mu, 2, b.D_z);
                    if (res.mode != "exact") mode = res.mode;
                    ++checked;
                }
                e.ok = true;
            } catch (const PcrisError& err) {
                e.detail = err.what();
            }
            e.mode = mode;
            e.witness = {{"basis_vectors", checked}};
            out.push_back(std::move(e));
        }
    }
    return out;
}

}  // namespace pcris
