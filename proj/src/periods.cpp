#include "pcris/periods.hpp"

#include <algorithm>
#include <sstream>

namespace pcris {

namespace {

// sum_k (-1)^k a(a-1)...(a-k+1) V^[k]: the expansion of (1 - V)^a; terminates because k! divides the falling factorial.
DPPoly one_minus_power_series(const DPRing& ring, std::size_t v, std::int64_t a, bool skip_constant = false) {
    const auto& P = ring->params();
    std::vector<DPPoly::Term> terms;
    std::uint64_t ff = 1 % P.modulus();
    for (std::uint64_t k = 0;; ++k) {
        if (k > 0) ff = P.mul(ff, P.reduce(a - static_cast<std::int64_t>(k - 1)));
        if (ff == 0) break;
        if (k > 0 || !skip_constant) {
            Mono m{};
            m[v] = static_cast<std::uint16_t>(k);
            if (!ring->admits(m)) break;  // caps are monotone in k
            terms.push_back({m, k % 2 ? P.neg(ff) : ff});
        }
        if (k >= 0xFFFF) throw PcrisError("series does not terminate");
    }
    return DPPoly::from_terms(ring, std::move(terms));
}

// (1 + V)^a - 1
DPPoly one_plus_power_minus_one(const DPRing& ring, std::size_t v, std::int64_t a) {
    const auto& P = ring->params();
    std::vector<DPPoly::Term> terms;
    std::uint64_t ff = 1 % P.modulus();
    for (std::uint64_t k = 1;; ++k) {
        ff = P.mul(ff, P.reduce(a - static_cast<std::int64_t>(k - 1)));
        if (ff == 0) break;
        Mono m{};
        m[v] = static_cast<std::uint16_t>(k);
        if (!ring->admits(m)) break;
        terms.push_back({m, ff});
        if (k >= 0xFFFF) throw PcrisError("series does not terminate");
    }
    return DPPoly::from_terms(ring, std::move(terms));
}

std::uint32_t floor_log(std::uint64_t k, std::uint32_t p) {
    std::uint32_t r = 0;
    while (k >= p) {
        k /= p;
        ++r;
    }
    return r;
}

// p^{m(k-1)}/k mod p^n
std::uint64_t scaled_reciprocal(std::uint64_t k, std::uint32_t m, const RingParams& P) {
    const std::uint32_t v = static_cast<std::uint32_t>(vp_int(static_cast<std::int64_t>(k), P.p()));
    const std::uint64_t e = static_cast<std::uint64_t>(m) * (k - 1) - v;
    if (e >= P.n()) return 0;
    std::uint64_t rest = k;
    for (std::uint32_t i = 0; i < v; ++i) rest /= P.p();
    return P.mul(P.ppow(static_cast<std::uint32_t>(e)), P.inv(rest % P.modulus()));
}

std::vector<std::string> module_vars(std::uint32_t d, Chart c) {
    const std::string s = c == Chart::X ? "X" : "Y";
    std::vector<std::string> v{"Z", "Xi", s};
    for (std::uint32_t i = 2; i <= d + 1; ++i) v.push_back(s + std::to_string(i));
    return v;
}

PadicExponent parse_padic(const std::string& s, std::uint32_t p) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return PadicExponent::integer(std::stoll(s), p);
    std::int64_t num = std::stoll(s.substr(0, slash));
    std::string den = s.substr(slash + 1);
    std::uint32_t level = 1;
    auto caret = den.find('^');
    if (caret != std::string::npos) level = static_cast<std::uint32_t>(std::stoul(den.substr(caret + 1)));
    return PadicExponent(num, level, p);
}

}  // namespace

PeriodModelDesc PeriodModelDesc::defaults(std::uint32_t p, std::uint32_t n, std::uint32_t m) {
    PeriodModelDesc d;
    d.params = RingParams(p, n);
    d.m = m;
    std::uint32_t pm = 1;
    for (std::uint32_t i = 0; i < m; ++i) pm *= p;
    d.D_z = 2 * pm;
    d.D_x = 3;
    d.N = 2 * static_cast<std::int64_t>(p);
    return d;
}

void PeriodModelDesc::validate() const {
    if (m < 1) throw PreconditionError("m must be >= 1");
    if (d < 1) throw PreconditionError("d must be >= 1");
    if (d + 3 > kMaxDPVars) throw PreconditionError("d must be <= " + std::to_string(kMaxDPVars - 3));
    if (r < 1 || r > d + 1) throw PreconditionError("r must satisfy 1 <= r <= d+1");
    if (D_z < 1 || D_x < 1) throw PreconditionError("degree caps must be >= 1");
    if (N < 1) throw PreconditionError("numerator bound must be >= 1");
    std::uint64_t pm = 1;
    for (std::uint32_t i = 0; i < m; ++i) {
        pm *= params.p();
        if (pm > (1u << 20)) throw PreconditionError("p^m too large");
    }
}

LatticeShape PeriodModelDesc::shape() const {
    LatticeShape s;
    s.p = params.p();
    s.m = m;
    s.d = d;
    s.r = r;
    s.c = c;
    s.N = N;
    return s;
}

nlohmann::json PeriodModelDesc::to_json() const {
    return {{"p", params.p()}, {"n", params.n()}, {"m", m},     {"d", d},         {"r", r},
            {"c", to_string(c)}, {"deg_z", D_z},  {"deg_x", D_x}, {"numerator_bound", N}};
}

PeriodModel::PeriodModel(PeriodModelDesc desc) : desc_(std::move(desc)) {
    desc_.validate();
    shape_ = desc_.shape();
    base_ = DPRingDesc::make(desc_.params, {"Z", "Xi"});
    module_x_ = DPRingDesc::make(desc_.params, module_vars(desc_.d, Chart::X));
    module_y_ = DPRingDesc::make(desc_.params, module_vars(desc_.d, Chart::Y));
}

DPRing PeriodModel::z_capped(const DPRing& ring, std::uint32_t cap_z, std::optional<std::uint32_t> cap_x) const {
    DPRingDesc::Caps caps(ring->nvars());
    caps[var::Z] = cap_z;
    if (cap_x)
        for (std::size_t v = var::U; v < ring->nvars(); ++v) caps[v] = *cap_x;
    return ring->with_caps(caps, std::nullopt);
}

Chart PeriodModel::chart_of(const DPRing& ring) const {
    if (ring->nvars() > var::U && ring->var(var::U) == "Y") return Chart::Y;
    return Chart::X;
}

std::vector<std::string> PeriodModel::dictionary() const {
    std::vector<std::string> out{"Z = 1 - [1]^(1/p^m)", "Xi = xi = [p] - p", "X = [pi] (x) u^-1 - 1",
                                 "Y = (1+X)^-1 - 1"};
    for (std::uint32_t i = 2; i <= desc_.d + 1; ++i)
        out.push_back("X" + std::to_string(i) + " = [T" + std::to_string(i) + "] (x) T" + std::to_string(i) +
                      "^-1 - 1");
    return out;
}

bool PeriodModel::cached(const std::string& key, DPPoly& out) const {
    std::lock_guard lock(mu_);
    auto it = poly_cache_.find(key);
    if (it == poly_cache_.end()) return false;
    out = it->second;
    return true;
}

const DPPoly& PeriodModel::store(const std::string& key, DPPoly value) const {
    std::lock_guard lock(mu_);
    return poly_cache_.emplace(key, std::move(value)).first->second;
}

const BaseElems& PeriodModel::base(const DPRing& ring) const {
    const std::string key = ring->describe();
    {
        std::lock_guard lock(mu_);
        auto it = base_cache_.find(key);
        if (it != base_cache_.end()) return *it->second;
    }
    if (ring->nvars() < 2 || ring->var(var::Z) != "Z" || ring->var(var::Xi) != "Xi")
        throw PreconditionError("ring " + key + " is not a model ring");
    auto b = std::make_unique<BaseElems>();
    const auto& P = ring->params();
    b->one = DPPoly::constant(ring, 1);
    b->qm = b->one - DPPoly::variable(ring, var::Z);
    b->q = q_power(PadicExponent::integer(1, P.p()), ring);
    b->qinv = q_power(PadicExponent::integer(-1, P.p()), ring);
    b->tau = log_unit(b->qm);
    b->t = b->tau.scaled(P.ppow(desc_.m));
    b->xi = DPPoly::variable(ring, var::Xi);
    b->wp = b->xi + DPPoly::constant(ring, P.p());
    std::lock_guard lock(mu_);
    return *base_cache_.emplace(key, std::move(b)).first->second;
}

DPPoly PeriodModel::q_power_series(const PadicExponent& alpha, const DPRing& ring) const {
    if (alpha.level() > desc_.m)
        throw ExponentOverflow("level of " + alpha.str() + " exceeds m = " + std::to_string(desc_.m));
    return one_minus_power_series(ring, var::Z, alpha.scaled(desc_.m));
}

DPPoly PeriodModel::q_power(const PadicExponent& alpha, const DPRing& ring) const {
    if (alpha.level() > desc_.m)
        throw ExponentOverflow("level of " + alpha.str() + " exceeds m = " + std::to_string(desc_.m));
    const std::int64_t e = alpha.scaled(desc_.m);
    const std::string key = ring->describe() + "|q|" + std::to_string(e);
    DPPoly out;
    if (cached(key, out)) return out;
    if (e >= 0) return store(key, one_minus_power_series(ring, var::Z, e));
    return store(key, invert_unit(q_power(-alpha, ring)));
}

DPPoly PeriodModel::u_alpha(std::int64_t alpha, const DPRing& ring) const {
    const std::string key = ring->describe() + "|u|" + std::to_string(alpha);
    DPPoly out;
    if (cached(key, out)) return out;
    const auto& P = ring->params();
    const std::uint32_t m = desc_.m;
    std::uint32_t kmax = 1;
    while (static_cast<std::int64_t>(m) * kmax - floor_log(kmax + 1, P.p()) < static_cast<std::int64_t>(P.n())) ++kmax;
    const auto& tau = base(ring).tau;
    auto G = dp_powers(tau, kmax);
    DPPoly u(ring);
    const std::uint64_t a = P.reduce(alpha);
    std::uint64_t apow = 1 % P.modulus();
    for (std::uint32_t k = 1; k <= kmax + 1; ++k) {
        if (k > 1) apow = P.mul(apow, a);
        const std::uint64_t c = P.mul(apow, scaled_reciprocal(k, m, P));
        if (c) u += G[k - 1].scaled(c);
    }
    return store(key, u);
}

DPPoly PeriodModel::u_alpha_inverse(std::int64_t alpha, const DPRing& ring) const {
    const std::string key = ring->describe() + "|uinv|" + std::to_string(alpha);
    DPPoly out;
    if (cached(key, out)) return out;
    return store(key, invert_unit(u_alpha(alpha, ring)));
}

DPPoly PeriodModel::h(std::uint32_t s, const DPRing& ring) const {
    if (s == 0) throw PreconditionError("h_s needs s >= 1");
    const std::string key = ring->describe() + "|h|" + std::to_string(s);
    DPPoly out;
    if (cached(key, out)) return out;
    const auto& P = ring->params();
    const std::uint64_t c = scaled_reciprocal(s, desc_.m, P);
    DPPoly v(ring);
    if (c) v = u_alpha(-1, ring).pow(s) * dp_power(base(ring).tau, s - 1).scaled(c);
    return store(key, v);
}

const PeriodModel::FractionalCofactor& PeriodModel::fractional_cofactor(const PadicExponent& gamma,
                                                                       const DPRing& ring) const {
    if (gamma.is_zero() || gamma.vp() >= 0) throw PreconditionError("fractional_cofactor needs v_p(gamma) < 0");
    if (!ring->cap(var::Z)) throw PreconditionError("fractional_cofactor needs a ring with capped Z-degree");
    const std::uint32_t cap = *ring->cap(var::Z);
    const std::string key = ring->describe() + "|c|" + gamma.str();
    {
        std::lock_guard lock(mu_);
        auto it = cofactor_cache_.find(key);
        if (it != cofactor_cache_.end()) return *it->second;
    }
    const auto& P = ring->params();
    const std::uint32_t j = gamma.level();
    if (j > desc_.m) throw ExponentOverflow("level of " + gamma.str() + " exceeds m");
    // W stands for 1 - [1]^(1/p^j): t = p^j log(1 - W), q^gamma - 1 = (1 - W)^a - 1.
    auto wring = DPRingDesc::make(P, {"W"});
    DPPoly one_w = DPPoly::constant(wring, 1);
    DPPoly tw = log_unit(one_w - DPPoly::variable(wring, 0)).scaled(P.ppow(j));
    DPPoly den = one_minus_power_series(wring, 0, gamma.numerator(), true);
    DivisionResult div = divide_filtered(tw, den, cap);
    DPPoly w_image = base(ring).one - q_power(PadicExponent(1, j, P.p()), ring);
    DPSubstitution push(wring, ring, {w_image});
    auto fc = std::make_unique<FractionalCofactor>(FractionalCofactor{push(div.quotient), div.exact, cap});
    std::lock_guard lock(mu_);
    return *cofactor_cache_.emplace(key, std::move(fc)).first->second;
}

const DPSubstitution& PeriodModel::substitution(const std::string& key,
                                                const std::function<std::unique_ptr<DPSubstitution>()>& make) const {
    {
        std::lock_guard lock(mu_);
        auto it = subst_cache_.find(key);
        if (it != subst_cache_.end()) return *it->second;
    }
    auto s = make();
    std::lock_guard lock(mu_);
    return *subst_cache_.emplace(key, std::move(s)).first->second;
}

// ---- PeriodElem ----

PeriodElem PeriodElem::monomial(const LatticeShape& shape, const ExponentVec& e, const DPPoly& coeff) {
    PeriodElem x(shape, coeff.ring());
    x.add_term(e, coeff);
    return x;
}

PeriodElem PeriodElem::scalar(const LatticeShape& shape, const DPPoly& coeff) {
    return monomial(shape, zero_exponent(shape), coeff);
}

DPPoly PeriodElem::coeff(const ExponentVec& e) const {
    auto it = terms_.find(normalize_semistable(shape_, e));
    return it == terms_.end() ? DPPoly(ring_) : it->second;
}

void PeriodElem::add_term(const ExponentVec& e0, const DPPoly& c) {
    if (c.is_zero()) return;
    ExponentVec e = normalize_semistable(shape_, e0);
    check_exponent(shape_, e);
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c.in_ring(ring_));
        return;
    }
    it->second += c.in_ring(ring_);
    if (it->second.is_zero()) terms_.erase(it);
}

PeriodElem PeriodElem::operator+(const PeriodElem& o) const {
    PeriodElem r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

PeriodElem PeriodElem::operator-() const {
    PeriodElem r(shape_, ring_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

PeriodElem PeriodElem::operator-(const PeriodElem& o) const { return *this + (-o); }

PeriodElem PeriodElem::operator*(const PeriodElem& o) const {
    PeriodElem r(shape_, ring_);
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) r.add_term(add_exponents(shape_, ea, eb), ca * cb);
    return r;
}

PeriodElem PeriodElem::scaled(const DPPoly& c) const {
    PeriodElem r(shape_, ring_);
    for (const auto& [e, x] : terms_) r.add_term(e, x * c);
    return r;
}

PeriodElem PeriodElem::times_exponent(const ExponentVec& f) const {
    PeriodElem r(shape_, ring_);
    for (const auto& [e, x] : terms_) r.add_term(add_exponents(shape_, e, f), x);
    return r;
}

PeriodElem PeriodElem::map_coeffs(const std::function<DPPoly(const ExponentVec&, const DPPoly&)>& f) const {
    PeriodElem r(shape_, ring_);
    bool first = true;
    for (const auto& [e, x] : terms_) {
        DPPoly y = f(e, x);
        if (first) {
            r.ring_ = y.ring();
            first = false;
        }
        r.add_term(e, y);
    }
    return r;
}

PeriodElem PeriodElem::in_ring(const DPRing& ring) const {
    PeriodElem r(shape_, ring);
    for (const auto& [e, x] : terms_) r.add_term(e, x.in_ring(ring));
    return r;
}

bool PeriodElem::operator==(const PeriodElem& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (const auto& [e, x] : terms_) {
        auto it = o.terms_.find(e);
        if (it == o.terms_.end() || !(it->second == x)) return false;
    }
    return true;
}

std::string PeriodElem::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [e, x] : terms_) {
        if (!s.empty()) s += " + ";
        s += "[T]^" + exponent_str(shape_, e) + " * (" + x.pretty() + ")";
    }
    return s;
}

DPPoly binomial_power(const DPRing& ring, std::size_t v, std::int64_t a) {
    return DPPoly::constant(ring, 1) + one_plus_power_minus_one(ring, v, a);
}

std::map<PadicExponent, PeriodElem> decompose_eigen(const PeriodElem& x, std::size_t i) {
    std::map<PadicExponent, PeriodElem> out;
    for (const auto& [e, c] : x.terms()) {
        PadicExponent a = character(x.shape(), e, i);
        auto it = out.find(a);
        if (it == out.end()) it = out.emplace(a, PeriodElem(x.shape(), x.ring())).first;
        it->second.add_term(e, c);
    }
    return out;
}

DPPoly frobenius_phi(const PeriodModel& model, const DPPoly& x) {
    const DPRing& ring = x.ring();
    const auto& sub = model.substitution("phi|" + ring->describe(), [&] {
        const auto& P = ring->params();
        const std::int64_t p = P.p();
        std::vector<DPPoly> images;
        for (std::size_t v = 0; v < ring->nvars(); ++v) {
            if (v == var::Z) {
                images.push_back(-one_minus_power_series(ring, v, p, true));
            } else if (v == var::Xi) {
                DPPoly wp = DPPoly::variable(ring, v) + DPPoly::constant(ring, p);
                images.push_back(wp.pow(static_cast<std::uint64_t>(p)) - DPPoly::constant(ring, p));
            } else {
                images.push_back(one_plus_power_minus_one(ring, v, p));
            }
        }
        return std::make_unique<DPSubstitution>(ring, ring, images, true);
    });
    return sub(x);
}

PeriodElem frobenius_phi(const PeriodModel& model, const PeriodElem& x) {
    PeriodElem r(x.shape(), x.ring());
    for (const auto& [e, c] : x.terms()) {
        ExponentVec f = e;
        for (auto& v : f.num) v *= x.shape().p;
        r.add_term(f, frobenius_phi(model, c));
    }
    return r;
}

nlohmann::json serialize(const PeriodElem& x) {
    nlohmann::json j;
    j["ring"] = x.ring()->describe();
    j["vars"] = x.ring()->vars();
    const auto& s = x.shape();
    j["lattice"] = {{"p", s.p}, {"m", s.m}, {"d", s.d}, {"r", s.r}, {"c", to_string(s.c)}};
    // group by Xi-degree: sum_k x_k Xi^[k]
    std::map<std::uint32_t, nlohmann::json> by_k;
    for (const auto& [e, c] : x.terms()) {
        std::map<std::uint32_t, std::vector<DPPoly::Term>> split;
        for (const auto& [mono, v] : c.terms()) {
            Mono m = mono;
            const std::uint32_t k = m[var::Xi];
            m[var::Xi] = 0;
            split[k].push_back({m, v});
        }
        for (auto& [k, terms] : split) {
            nlohmann::json entry;
            std::vector<std::string> ex;
            for (const auto& pe : to_padic(s, e)) ex.push_back(pe.str());
            entry["exponent"] = ex;
            entry["coefficient"] = DPPoly::from_terms(x.ring(), std::move(terms)).str();
            by_k[k].push_back(entry);
        }
    }
    nlohmann::json nf = nlohmann::json::array();
    for (auto& [k, entries] : by_k) nf.push_back({{"xi_degree", k}, {"terms", entries}});
    j["normal_form"] = nf;
    return j;
}

PeriodElem deserialize(const LatticeShape& shape, const DPRing& ring, const nlohmann::json& j) {
    PeriodElem x(shape, ring);
    for (const auto& block : j.at("normal_form")) {
        Mono xi{};
        xi[var::Xi] = static_cast<std::uint16_t>(block.at("xi_degree").get<std::uint32_t>());
        for (const auto& t : block.at("terms")) {
            std::vector<PadicExponent> coords;
            for (const auto& s : t.at("exponent")) coords.push_back(parse_padic(s.get<std::string>(), shape.p));
            DPPoly c = parse_dp(ring, t.at("coefficient").get<std::string>());
            if (xi[var::Xi]) {
                for (const auto& [m, v] : c.terms())
                    if (m[var::Xi]) throw PreconditionError("deserialize: Xi inside an x_k coefficient");
            }
            x.add_term(from_padic(shape, coords), c.times_monomial(xi, 1));
        }
    }
    return x;
}

nlohmann::json CheckEntry::to_json() const {
    return {{"claim_id", claim_id}, {"anchor", anchor}, {"parameters", parameters}, {"witness", witness},
            {"mode", mode},         {"status", ok ? "pass" : "fail"}, {"detail", detail}};
}

std::vector<CheckEntry> verify_constants(const PeriodModel& model, ConstantsOptions opt) {
    const auto& P = model.params();
    const std::int64_t p = P.p();
    const std::uint32_t m = model.desc().m;
    std::int64_t pm = 1;
    for (std::uint32_t i = 0; i < m; ++i) pm *= p;
    if (opt.alpha_int_max < 0) opt.alpha_int_max = 2 * p * p;
    if (opt.frac_numerator_max < 0) opt.frac_numerator_max = p * p;
    if (opt.cap == 0) opt.cap = static_cast<std::uint32_t>(4 * pm);

    const nlohmann::json base_params = {{"p", p}, {"n", P.n()}, {"m", m}};
    std::vector<CheckEntry> out;
    const DPRing& ring = model.base_ring();
    const auto& B = model.base(ring);

    {
        auto e = CheckEntry::make("constants.i", "t^(p-1) lies in p A_cris", base_params);
        // t = p^m tau, so t^(p-1) = p * p^{m(p-1)-1} tau^(p-1)
        const std::uint32_t ex = m * static_cast<std::uint32_t>(p - 1) - 1;
        DPPoly cof = B.tau.pow(static_cast<std::uint64_t>(p - 1)).scaled(P.ppow(ex));
        DPPoly lhs = B.t.pow(static_cast<std::uint64_t>(p - 1));
        e.ok = lhs == cof.scaled(P.ppow(1)) && lhs.divisible_by_ppow(1);
        e.witness = {{"cofactor", cof.str()}, {"cofactor_formula", "p^(m(p-1)-1) * tau^(p-1)"}};
        e.detail = "divisibility is inherited from t = p^m tau";
        out.push_back(std::move(e));
    }

    for (std::int64_t a = -opt.alpha_int_max; a <= opt.alpha_int_max; ++a) {
        auto e = CheckEntry::make("constants.ii", "q^a - 1 = a t u_a with u_a a unit", base_params);
        e.parameters["alpha"] = a;
        DPPoly u = model.u_alpha(a, ring);
        DPPoly lhs = model.q_power(PadicExponent::integer(a, p), ring) - B.one;
        DPPoly rhs = (B.t * u).scaled_signed(a);
        DPPoly uinv = model.u_alpha_inverse(a, ring);
        const bool unit = u.constant_term() == 1 && (u * uinv) == B.one;
        e.ok = lhs == rhs && unit;
        e.witness = {{"u_alpha", u.str()}};
        if (!e.ok) e.detail = lhs == rhs ? "u_alpha not invertible" : "identity mismatch";
        out.push_back(std::move(e));
    }

    if (opt.include_integer_iii) {
        for (std::int64_t a = -opt.alpha_int_max; a <= opt.alpha_int_max; ++a) {
            if (a == 0) continue;
            auto e = CheckEntry::make("constants.iii", "t p^max(v_p(a),0) / (q^a - 1) is integral", base_params);
            e.parameters["alpha"] = std::to_string(a);
            const std::uint32_t v = static_cast<std::uint32_t>(vp_int(a, P.p()));
            std::int64_t unit_part = a;
            for (std::uint32_t i = 0; i < v; ++i) unit_part /= p;
            DPPoly cof = model.u_alpha_inverse(a, ring).scaled(P.inv(P.reduce(unit_part)));
            DPPoly lhs = (model.q_power(PadicExponent::integer(a, p), ring) - B.one) * cof;
            e.ok = lhs == B.t.scaled(P.ppow(v));
            e.witness = {{"cofactor", cof.str()}, {"route", "unit factorization"}};
            out.push_back(std::move(e));
        }
    }

    const DPRing zcap = model.z_capped(ring, opt.cap);
    const auto& Bc = model.base(zcap);
    for (std::uint32_t j = 1; j <= m; ++j) {
        for (std::int64_t a = -opt.frac_numerator_max; a <= opt.frac_numerator_max; ++a) {
            if (a % p == 0) continue;
            PadicExponent alpha(a, j, P.p());
            auto e = CheckEntry::make("constants.iii", "t p^max(v_p(a),0) / (q^a - 1) is integral", base_params);
            e.parameters["alpha"] = alpha.str();
            e.parameters["cap"] = opt.cap;
            e.mode = "cap-truncated";
            try {
                const auto& fc = model.fractional_cofactor(alpha, zcap);
                DPPoly lhs = (model.q_power(alpha, zcap) - Bc.one) * fc.value;
                e.ok = lhs == Bc.t;
                e.witness = {{"cofactor", fc.value.str()}, {"pivot", std::to_string(-a)}, {"route", "unit-pivot division"}};
                e.detail = fc.exact_in_w ? "division exact before push-forward" : "division holds modulo the cap";
            } catch (const PcrisError& err) {
                e.ok = false;
                e.detail = err.what();
            }
            out.push_back(std::move(e));
        }
    }
    return out;
}

}  // namespace pcris
