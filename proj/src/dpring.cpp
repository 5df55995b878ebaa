#include "pcris/dpring.hpp"

#include "pcris/linalg.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

namespace pcris {

namespace {

struct MonoHash {
    std::size_t operator()(const Mono& m) const {
        std::uint64_t h = 1469598103934665603ULL;
        for (auto k : m) {
            h ^= k;
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

bool term_less(const DPPoly::Term& a, const DPPoly::Term& b) {
    std::uint32_t da = mono_degree(a.first), db = mono_degree(b.first);
    if (da != db) return da < db;
    return a.first < b.first;
}

Mono zero_mono() {
    Mono m{};
    m.fill(0);
    return m;
}

}  // namespace

DPRingDesc::DPRingDesc(const RingParams& params, std::vector<std::string> vars, Caps caps,
                       std::optional<std::uint32_t> total_cap)
    : params_(params), binom_(BinomTable::get(params)), vars_(std::move(vars)), caps_(std::move(caps)),
      total_cap_(total_cap) {
    if (vars_.size() > kMaxDPVars)
        throw std::invalid_argument("DPRingDesc: at most " + std::to_string(kMaxDPVars) + " variables");
    std::set<std::string> seen(vars_.begin(), vars_.end());
    if (seen.size() != vars_.size()) throw std::invalid_argument("DPRingDesc: variable names must be distinct");
    if (caps_.empty()) caps_.assign(vars_.size(), std::nullopt);
    if (caps_.size() != vars_.size()) throw std::invalid_argument("DPRingDesc: one cap entry per variable");
}

std::shared_ptr<const DPRingDesc> DPRingDesc::make(const RingParams& params, std::vector<std::string> vars,
                                                   Caps caps, std::optional<std::uint32_t> total_cap) {
    return std::make_shared<const DPRingDesc>(params, std::move(vars), std::move(caps), total_cap);
}

bool DPRingDesc::truncated() const {
    if (total_cap_) return true;
    return std::any_of(caps_.begin(), caps_.end(), [](const auto& c) { return c.has_value(); });
}

int DPRingDesc::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return static_cast<int>(i);
    return -1;
}

std::shared_ptr<const DPRingDesc> DPRingDesc::with_caps(Caps caps, std::optional<std::uint32_t> total_cap) const {
    return make(params_, vars_, std::move(caps), total_cap);
}

std::string DPRingDesc::describe() const {
    std::ostringstream os;
    os << "Z/" << params_.modulus() << "<";
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (i) os << ",";
        os << vars_[i];
        if (caps_[i]) os << "<=" << *caps_[i];
    }
    os << ">";
    if (total_cap_) os << " deg<=" << *total_cap_;
    return os.str();
}

DPPoly DPPoly::constant(const DPRing& ring, std::int64_t c) { return constant_raw(ring, ring->params().reduce(c)); }

DPPoly DPPoly::constant_raw(const DPRing& ring, std::uint64_t c) {
    DPPoly r(ring);
    c %= ring->params().modulus();
    if (c) r.terms_.push_back({zero_mono(), c});
    return r;
}

DPPoly DPPoly::variable(const DPRing& ring, std::size_t v) {
    if (v >= ring->nvars()) throw std::out_of_range("DPPoly::variable: index out of range");
    Mono m = zero_mono();
    m[v] = 1;
    return monomial(ring, m, 1);
}

DPPoly DPPoly::variable(const DPRing& ring, const std::string& name) {
    int i = ring->index_of(name);
    if (i < 0) throw std::invalid_argument("DPPoly::variable: no variable named " + name);
    return variable(ring, static_cast<std::size_t>(i));
}

DPPoly DPPoly::monomial(const DPRing& ring, const Mono& m, std::uint64_t c) {
    DPPoly r(ring);
    c %= ring->params().modulus();
    if (c && ring->admits(m)) r.terms_.push_back({m, c});
    return r;
}

DPPoly DPPoly::from_terms(const DPRing& ring, std::vector<Term> terms) {
    DPPoly r(ring);
    const RingParams& P = ring->params();
    std::sort(terms.begin(), terms.end(), term_less);
    for (auto& t : terms) {
        if (!ring->admits(t.first)) continue;
        std::uint64_t c = t.second % P.modulus();
        if (!r.terms_.empty() && r.terms_.back().first == t.first) {
            r.terms_.back().second = P.add(r.terms_.back().second, c);
        } else {
            r.terms_.push_back({t.first, c});
        }
    }
    std::erase_if(r.terms_, [](const Term& t) { return t.second == 0; });
    return r;
}

std::uint64_t DPPoly::constant_term() const {
    if (!terms_.empty() && mono_degree(terms_.front().first) == 0) return terms_.front().second;
    return 0;
}

std::uint64_t DPPoly::coeff(const Mono& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), Term{m, 0}, term_less);
    if (it != terms_.end() && it->first == m) return it->second;
    return 0;
}

std::uint32_t DPPoly::min_degree() const {
    if (terms_.empty()) throw PreconditionError("min_degree of zero");
    return mono_degree(terms_.front().first);
}

std::uint32_t DPPoly::max_degree() const { return terms_.empty() ? 0 : mono_degree(terms_.back().first); }

std::uint32_t DPPoly::max_degree_in(std::size_t v) const {
    std::uint32_t m = 0;
    for (const auto& t : terms_) m = std::max<std::uint32_t>(m, t.first[v]);
    return m;
}

bool DPPoly::divisible_by_ppow(std::uint32_t e) const {
    if (e == 0) return true;
    const auto& P = params();
    if (e >= P.n()) return terms_.empty();
    std::uint64_t pe = P.ppow(e);
    return std::all_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.second % pe == 0; });
}

DPPoly DPPoly::divided_by_ppow(std::uint32_t e) const {
    if (!divisible_by_ppow(e)) throw PreconditionError("divided_by_ppow: not divisible");
    if (e == 0) return *this;
    std::uint64_t pe = params().ppow(e);
    DPPoly r(ring_);
    for (const auto& t : terms_) r.terms_.push_back({t.first, t.second / pe});
    return r;
}

void DPPoly::check_same(const DPPoly& o) const {
    if (!ring_ || !o.ring_) throw std::logic_error("DPPoly: uninitialized ring");
    if (ring_ != o.ring_ && !ring_->same_as(*o.ring_))
        throw std::invalid_argument("DPPoly: operands live in different rings (" + ring_->describe() + " vs " +
                                    o.ring_->describe() + ")");
}

DPPoly DPPoly::operator+(const DPPoly& o) const {
    check_same(o);
    const auto& P = params();
    DPPoly r(ring_);
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
        if (j == o.terms_.size() || (i < terms_.size() && term_less(terms_[i], o.terms_[j]))) {
            r.terms_.push_back(terms_[i++]);
        } else if (i == terms_.size() || term_less(o.terms_[j], terms_[i])) {
            r.terms_.push_back(o.terms_[j++]);
        } else {
            std::uint64_t c = P.add(terms_[i].second, o.terms_[j].second);
            if (c) r.terms_.push_back({terms_[i].first, c});
            ++i;
            ++j;
        }
    }
    return r;
}

DPPoly DPPoly::operator-() const {
    DPPoly r(ring_);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.first, params().neg(t.second)});
    return r;
}

DPPoly DPPoly::operator-(const DPPoly& o) const { return *this + (-o); }

DPPoly DPPoly::scaled(std::uint64_t c) const {
    const auto& P = params();
    c %= P.modulus();
    DPPoly r(ring_);
    if (!c) return r;
    for (const auto& t : terms_) {
        std::uint64_t v = P.mul(t.second, c);
        if (v) r.terms_.push_back({t.first, v});
    }
    return r;
}

DPPoly DPPoly::times_monomial(const Mono& m, std::uint64_t c) const {
    const auto& P = params();
    auto& B = ring_->binom();
    const std::size_t nv = ring_->nvars();
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        Mono s{};
        for (std::size_t v = 0; v < kMaxDPVars; ++v) s[v] = static_cast<std::uint16_t>(t.first[v] + m[v]);
        if (!ring_->admits(s)) continue;
        std::uint64_t coef = P.mul(t.second, c);
        for (std::size_t v = 0; v < nv && coef; ++v)
            if (m[v] && t.first[v]) coef = P.mul(coef, B(s[v], m[v]));
        if (coef) out.push_back({s, coef});
    }
    return from_terms(ring_, std::move(out));
}

DPPoly DPPoly::operator*(const DPPoly& o) const {
    check_same(o);
    if (terms_.empty() || o.terms_.empty()) return DPPoly(ring_);
    const auto& P = params();
    auto& B = ring_->binom();
    const std::size_t nv = ring_->nvars();
    std::unordered_map<Mono, std::uint64_t, MonoHash> acc;
    acc.reserve(terms_.size() * o.terms_.size());
    Mono s{};
    for (const auto& a : terms_)
        for (const auto& b : o.terms_) {
            for (std::size_t v = 0; v < kMaxDPVars; ++v) s[v] = static_cast<std::uint16_t>(a.first[v] + b.first[v]);
            if (!ring_->admits(s)) continue;
            std::uint64_t coef = P.mul(a.second, b.second);
            for (std::size_t v = 0; v < nv && coef; ++v)
                if (a.first[v] && b.first[v]) coef = P.mul(coef, B(s[v], a.first[v]));
            if (!coef) continue;
            auto [it, ins] = acc.emplace(s, coef);
            if (!ins) it->second = P.add(it->second, coef);
        }
    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (c) out.push_back({m, c});
    std::sort(out.begin(), out.end(), term_less);
    DPPoly r(ring_);
    r.terms_ = std::move(out);
    return r;
}

DPPoly DPPoly::pow(std::uint64_t e) const {
    DPPoly r = constant(ring_, 1), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

bool DPPoly::operator==(const DPPoly& o) const {
    check_same(o);
    return terms_ == o.terms_;
}

DPPoly DPPoly::in_ring(const DPRing& other) const {
    if (other->vars() != ring_->vars() || other->params() != ring_->params())
        throw std::invalid_argument("DPPoly::in_ring: incompatible ring");
    DPPoly r(other);
    for (const auto& t : terms_)
        if (other->admits(t.first)) r.terms_.push_back(t);
    return r;
}

DPPoly DPPoly::filtered(const std::function<bool(const Mono&)>& pred) const {
    DPPoly r(ring_);
    for (const auto& t : terms_)
        if (pred(t.first)) r.terms_.push_back(t);
    return r;
}

std::string DPPoly::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& t : terms_) {
        if (!s.empty()) s += " + ";
        s += std::to_string(t.second) + "·V^[";
        for (std::size_t v = 0; v < ring_->nvars(); ++v) {
            if (v) s += ",";
            s += std::to_string(t.first[v]);
        }
        s += "]";
    }
    return s;
}

std::string DPPoly::pretty() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& t : terms_) {
        if (!s.empty()) s += " + ";
        s += std::to_string(t.second);
        for (std::size_t v = 0; v < ring_->nvars(); ++v)
            if (t.first[v]) s += "*" + ring_->var(v) + "^[" + std::to_string(t.first[v]) + "]";
    }
    return s;
}

namespace {

// gamma_j(M) coefficient for a nonconstant monomial, given the previous one (j-1).
std::uint64_t gamma_step(const Mono& m, std::size_t nv, std::uint32_t j, BinomTable& B, const RingParams& P) {
    std::size_t first = nv;
    for (std::size_t v = 0; v < nv; ++v)
        if (m[v]) {
            first = v;
            break;
        }
    std::uint64_t c = 1 % P.modulus();
    for (std::size_t v = 0; v < nv && c; ++v) {
        if (!m[v]) continue;
        std::uint64_t k = m[v];
        if (v == first)
            c = P.mul(c, B(j * k - 1, k - 1));
        else
            c = P.mul(c, B(j * k, k));
    }
    return c;
}

// gamma_0(cM), ..., gamma_q(cM) as (mono, coefficient); stops early once the coefficient is 0
// or the monomial leaves the quotient (both persist for larger j).
std::vector<DPPoly::Term> monomial_gammas(const DPRing& ring, const Mono& m, std::uint64_t c, std::uint32_t q) {
    const auto& P = ring->params();
    std::vector<DPPoly::Term> out;
    out.push_back({zero_mono(), 1 % P.modulus()});
    std::uint64_t coef = 1 % P.modulus();
    for (std::uint32_t j = 1; j <= q; ++j) {
        Mono s{};
        for (std::size_t v = 0; v < kMaxDPVars; ++v) {
            std::uint32_t e = j * static_cast<std::uint32_t>(m[v]);
            if (e > 0xffff) throw ExponentOverflow("divided-power exponent beyond 65535");
            s[v] = static_cast<std::uint16_t>(e);
        }
        if (!ring->admits(s)) break;
        coef = P.mul(coef, P.mul(c, gamma_step(m, ring->nvars(), j, ring->binom(), P)));
        if (!coef) break;
        out.push_back({s, coef});
    }
    return out;
}

}  // namespace

std::uint64_t dp_power_of_constant(std::int64_t c, std::uint32_t k, const RingParams& P) {
    if (k == 0) return 1 % P.modulus();
    std::uint64_t cr = P.reduce(c);
    if (cr == 0) return 0;
    if (cr % P.p() != 0) throw PreconditionError("gamma of a constant needs p | c");
    std::uint64_t v = 0, u = cr;
    while (u % P.p() == 0) {
        u /= P.p();
        ++v;
    }
    std::uint64_t vf = vp_factorial(k, P.p());
    std::uint64_t total = v * k - vf;
    if (total >= P.n()) return 0;
    std::uint64_t unit_fact = 1 % P.modulus();
    for (std::uint64_t j = 2; j <= k; ++j) {
        std::uint64_t jj = j;
        while (jj % P.p() == 0) jj /= P.p();
        unit_fact = P.mul(unit_fact, jj % P.modulus());
    }
    std::uint64_t r = P.mul(P.pow(u % P.modulus(), k), P.inv(unit_fact));
    return P.mul(r, P.ppow(static_cast<std::uint32_t>(total)));
}

std::vector<DPPoly> dp_powers(const DPPoly& x, std::uint32_t q, bool allow_p_constant) {
    const DPRing& ring = x.ring();
    const auto& P = ring->params();
    std::vector<DPPoly> G(q + 1, DPPoly(ring));
    std::uint64_t c0 = x.constant_term();
    if (c0 != 0) {
        if (!allow_p_constant) throw PreconditionError("dp_power: argument has a nonzero constant term");
        if (c0 % P.p() != 0) throw PreconditionError("dp_power: constant term is not divisible by p");
        for (std::uint32_t i = 0; i <= q; ++i)
            G[i] = DPPoly::constant_raw(ring, dp_power_of_constant(static_cast<std::int64_t>(c0), i, P));
    } else {
        G[0] = DPPoly::constant(ring, 1);
    }
    for (const auto& t : x.terms()) {
        if (mono_degree(t.first) == 0) continue;
        auto gam = monomial_gammas(ring, t.first, t.second, q);
        std::vector<DPPoly> next(q + 1, DPPoly(ring));
        for (std::uint32_t i = 0; i <= q; ++i) {
            DPPoly acc(ring);
            for (std::uint32_t j = 0; j <= i && j < gam.size(); ++j) {
                if (G[i - j].is_zero()) continue;
                acc += G[i - j].times_monomial(gam[j].first, gam[j].second);
            }
            next[i] = std::move(acc);
        }
        G = std::move(next);
    }
    return G;
}

DPPoly dp_power(const DPPoly& x, std::uint32_t q, bool allow_p_constant) {
    return dp_powers(x, q, allow_p_constant)[q];
}

DPPoly exp_ideal(const DPPoly& x) {
    if (!x.in_ideal()) throw PreconditionError("exp_ideal: argument must lie in the DP ideal");
    const DPRing& ring = x.ring();
    DPPoly result = DPPoly::constant(ring, 1);
    constexpr std::uint32_t kGuard = 4096;
    for (const auto& t : x.terms()) {
        auto gam = monomial_gammas(ring, t.first, t.second, kGuard);
        if (gam.size() > kGuard)
            throw PreconditionError("exp_ideal: series does not terminate (unit coefficient in an untruncated ring)");
        std::vector<DPPoly::Term> terms(gam.begin(), gam.end());
        result = result * DPPoly::from_terms(ring, std::move(terms));
    }
    return result;
}

DPPoly log_unit(const DPPoly& u) {
    const auto& P = u.params();
    if (u.constant_term() != 1 % P.modulus()) throw PreconditionError("log_unit: constant term must be 1");
    DPPoly y = u - DPPoly::constant(u.ring(), 1);
    // (k-1)! y^[k] vanishes once v_p((k-1)!) >= n
    std::uint32_t K = 1;
    while (vp_factorial(K, P.p()) < P.n()) ++K;
    auto G = dp_powers(y, K);
    DPPoly r(u.ring());
    std::uint64_t fact = 1 % P.modulus();  // (k-1)!
    for (std::uint32_t k = 1; k <= K; ++k) {
        if (k > 1) fact = P.mul(fact, k - 1);
        if (!fact) break;
        std::uint64_t c = (k % 2 == 1) ? fact : P.neg(fact);
        r += G[k].scaled(c);
    }
    return r;
}

DPPoly invert_unit(const DPPoly& u) {
    const auto& P = u.params();
    std::uint64_t c0 = u.constant_term();
    if (!P.is_unit(c0)) throw PreconditionError("invert_unit: constant term is not a unit");
    std::uint64_t ci = P.inv(c0);
    DPPoly one = DPPoly::constant(u.ring(), 1);
    DPPoly w = (one - u.scaled(ci));  // u/c0 = 1 - w, w in the DP ideal
    std::uint32_t K = nilpotency_bound(P);
    DPPoly r = one;
    for (std::uint32_t k = 1; k < K; ++k) r = one + w * r;
    return r.scaled(ci);
}

DPPoly truncate(const DPPoly& x, std::uint32_t D) {
    const DPRing& ring = x.ring();
    std::uint32_t cap = D;
    if (ring->total_cap()) cap = std::min(cap, *ring->total_cap());
    if (ring->total_cap() && *ring->total_cap() == cap) return x;
    return x.in_ring(ring->with_caps(ring->caps(), cap));
}

DPPoly dp_derivative(const DPPoly& x, std::size_t v) {
    std::vector<DPPoly::Term> out;
    for (const auto& t : x.terms()) {
        if (!t.first[v]) continue;
        Mono m = t.first;
        --m[v];
        out.push_back({m, t.second});
    }
    return DPPoly::from_terms(x.ring(), std::move(out));
}

DPPoly dp_antiderivative(const DPPoly& x, std::size_t v) {
    std::vector<DPPoly::Term> out;
    for (const auto& t : x.terms()) {
        Mono m = t.first;
        ++m[v];
        out.push_back({m, t.second});
    }
    return DPPoly::from_terms(x.ring(), std::move(out));
}

namespace {

void enumerate_monos(const DPRing& ring, const std::vector<std::size_t>& active, std::uint32_t maxdeg,
                     std::vector<Mono>& out) {
    Mono cur = zero_mono();
    std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t idx, std::uint32_t left) {
        if (idx == active.size()) {
            if (ring->admits(cur)) out.push_back(cur);
            return;
        }
        std::size_t v = active[idx];
        std::uint32_t lim = left;
        if (ring->cap(v)) lim = std::min(lim, *ring->cap(v));
        for (std::uint32_t k = 0; k <= lim; ++k) {
            cur[v] = static_cast<std::uint16_t>(k);
            rec(idx + 1, left - k);
        }
        cur[v] = 0;
    };
    rec(0, maxdeg);
    std::sort(out.begin(), out.end(), [](const Mono& a, const Mono& b) {
        std::uint32_t da = mono_degree(a), db = mono_degree(b);
        return da != db ? da < db : a < b;
    });
}

}  // namespace

DivisionResult divide_filtered(const DPPoly& num, const DPPoly& den, std::uint32_t cap) {
    if (!num.ring()->same_as(*den.ring())) throw std::invalid_argument("divide_filtered: operands in different rings");
    if (den.is_zero()) throw PreconditionError("divide_filtered: zero denominator");
    if (!den.in_ideal()) throw PreconditionError("divide_filtered: denominator must have zero constant term");
    const DPRing ring = num.ring();
    const auto& P = ring->params();
    const std::uint32_t d0 = den.min_degree();
    bool unit_low = false;
    for (const auto& t : den.terms())
        if (mono_degree(t.first) == d0 && P.is_unit(t.second)) unit_low = true;
    if (!unit_low) throw NoUnitPivot("lowest-degree coefficient of the denominator is divisible by p");

    const DPRing qring = ring->with_caps(ring->caps(), ring->total_cap() ? std::min(*ring->total_cap(), cap) : cap);
    const DPPoly numc = num.in_ring(qring), denc = den.in_ring(qring);

    std::vector<std::size_t> active;
    for (std::size_t v = 0; v < ring->nvars(); ++v) {
        bool used = false;
        for (const auto& t : numc.terms()) used |= t.first[v] != 0;
        for (const auto& t : denc.terms()) used |= t.first[v] != 0;
        if (used) active.push_back(v);
    }

    DivisionResult res;
    DPPoly quotient(qring);
    bool solved = false;

    // stage-by-stage solve when there is a single active variable and every stage pivot is a unit
    if (active.size() == 1 && cap >= d0) {
        std::size_t v = active[0];
        auto& B = ring->binom();
        std::uint64_t lead = den.coeff([&] { Mono m = zero_mono(); m[v] = static_cast<std::uint16_t>(d0); return m; }());
        bool units = true;
        for (std::uint32_t d = d0; d <= cap && units; ++d) units = P.is_unit(P.mul(lead, B(d, d0)));
        if (units) {
            std::vector<std::uint64_t> qc(cap - d0 + 1, 0);
            auto dcoef = [&](std::uint32_t k) {
                Mono m = zero_mono();
                m[v] = static_cast<std::uint16_t>(k);
                return denc.coeff(m);
            };
            for (std::uint32_t d = d0; d <= cap; ++d) {
                Mono m = zero_mono();
                m[v] = static_cast<std::uint16_t>(d);
                if (!qring->admits(m)) break;
                std::uint64_t rhs = numc.coeff(m);
                for (std::uint32_t j = 0; j + d0 < d; ++j) {
                    std::uint32_t i = d - j;
                    std::uint64_t di = dcoef(i);
                    if (di && qc[j]) rhs = P.sub(rhs, P.mul(P.mul(di, qc[j]), B(d, i)));
                }
                qc[d - d0] = P.mul(rhs, P.inv(P.mul(lead, B(d, d0))));
            }
            std::vector<DPPoly::Term> terms;
            for (std::uint32_t j = 0; j < qc.size(); ++j) {
                Mono m = zero_mono();
                m[v] = static_cast<std::uint16_t>(j);
                terms.push_back({m, qc[j]});
            }
            quotient = DPPoly::from_terms(qring, std::move(terms));
            solved = true;
            res.triangular = true;
        }
    }

    if (!solved) {
        std::vector<Mono> eqs, unk;
        enumerate_monos(qring, active, cap, eqs);
        if (cap >= d0) enumerate_monos(qring, active, cap - d0, unk);
        std::unordered_map<Mono, std::size_t, MonoHash> row;
        for (std::size_t i = 0; i < eqs.size(); ++i) row[eqs[i]] = i;
        ModMatrix A(eqs.size(), unk.size(), P);
        for (std::size_t j = 0; j < unk.size(); ++j) {
            DPPoly col = denc.times_monomial(unk[j], 1);
            for (const auto& t : col.terms()) A(row.at(t.first), j) = t.second;
        }
        ModVec b(eqs.size(), 0);
        for (const auto& t : numc.terms()) {
            auto it = row.find(t.first);
            if (it == row.end()) throw std::logic_error("divide_filtered: numerator monomial outside the system");
            b[it->second] = t.second;
        }
        SmithForm s = snf_local(A, true);
        auto x = solve_linear(s, b);
        if (!x) throw InconsistentSystem("no quotient modulo degree > " + std::to_string(cap));
        std::vector<DPPoly::Term> terms;
        for (std::size_t j = 0; j < unk.size(); ++j) terms.push_back({unk[j], (*x)[j]});
        quotient = DPPoly::from_terms(qring, std::move(terms));
    }

    if (denc * quotient != numc) throw VerificationFailure("divide_filtered re-multiplication");
    res.quotient = quotient.in_ring(ring);
    const DPRing full = ring->untruncated();
    res.exact = (den.in_ring(full) * quotient.in_ring(full)) == num.in_ring(full);
    return res;
}

DPSubstitution::DPSubstitution(DPRing source, DPRing target, std::vector<DPPoly> images, bool allow_p_constant)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)),
      allow_p_constant_(allow_p_constant), cache_(images_.size()) {
    if (images_.size() != source_->nvars()) throw std::invalid_argument("DPSubstitution: one image per variable");
    if (source_->params() != target_->params()) throw std::invalid_argument("DPSubstitution: coefficient rings differ");
    for (std::size_t v = 0; v < images_.size(); ++v) {
        images_[v] = images_[v].in_ring(target_);
        std::uint64_t c = images_[v].constant_term();
        if (c && !(allow_p_constant_ && c % target_->params().p() == 0))
            throw PreconditionError("DPSubstitution: image of " + source_->var(v) + " is outside the DP ideal");
    }
}

const DPPoly& DPSubstitution::gamma(std::size_t v, std::uint32_t k) const {
    std::lock_guard lock(mu_);
    auto& c = cache_[v];
    if (c.size() <= k) c = dp_powers(images_[v], std::max<std::uint32_t>(k, 2 * static_cast<std::uint32_t>(c.size())), allow_p_constant_);
    return c[k];
}

DPPoly DPSubstitution::operator()(const DPPoly& x) const {
    if (!x.ring()->same_as(*source_)) throw std::invalid_argument("DPSubstitution: element from another ring");
    DPPoly r(target_);
    for (const auto& t : x.terms()) {
        DPPoly term = DPPoly::constant_raw(target_, t.second);
        for (std::size_t v = 0; v < source_->nvars() && !term.is_zero(); ++v)
            if (t.first[v]) term = term * gamma(v, t.first[v]);
        r += term;
    }
    return r;
}

DPPoly parse_dp(const DPRing& ring, const std::string& text) {
    std::vector<DPPoly::Term> terms;
    if (text == "0") return DPPoly(ring);
    const std::string dot = "·V^[";
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(" + ", pos);
        if (end == std::string::npos) end = text.size();
        std::string tok = text.substr(pos, end - pos);
        std::size_t d = tok.find(dot);
        if (d == std::string::npos || tok.back() != ']') throw std::invalid_argument("parse_dp: malformed term '" + tok + "'");
        std::uint64_t c = std::stoull(tok.substr(0, d));
        std::string idx = tok.substr(d + dot.size(), tok.size() - d - dot.size() - 1);
        Mono m = zero_mono();
        std::size_t v = 0, q = 0;
        while (q <= idx.size()) {
            std::size_t comma = idx.find(',', q);
            if (comma == std::string::npos) comma = idx.size();
            if (v >= ring->nvars()) throw std::invalid_argument("parse_dp: too many indices");
            m[v++] = static_cast<std::uint16_t>(std::stoul(idx.substr(q, comma - q)));
            q = comma + 1;
        }
        if (v != ring->nvars()) throw std::invalid_argument("parse_dp: index count mismatch");
        terms.push_back({m, c});
        pos = end + 3;
    }
    return DPPoly::from_terms(ring, std::move(terms));
}

}  // namespace pcris
