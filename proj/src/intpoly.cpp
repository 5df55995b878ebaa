#include "pcris/intpoly.hpp"

#include <stdexcept>

namespace pcris {

IntPoly IntPoly::constant(std::size_t nvars, const BigInt& c) {
    IntPoly r(nvars);
    r.add_term(Exps(nvars, 0), c);
    return r;
}

IntPoly IntPoly::variable(std::size_t nvars, std::size_t v) {
    IntPoly r(nvars);
    Exps e(nvars, 0);
    e.at(v) = 1;
    r.add_term(e, 1);
    return r;
}

std::uint32_t IntPoly::max_exponent(std::size_t v) const {
    std::uint32_t m = 0;
    for (const auto& [e, c] : terms_) m = std::max(m, e[v]);
    return m;
}

void IntPoly::add_term(const Exps& e, const BigInt& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("IntPoly: variable count mismatch");
    IntPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

IntPoly IntPoly::operator-(const IntPoly& o) const { return *this + o.scaled(-1); }

IntPoly IntPoly::operator*(const IntPoly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("IntPoly: variable count mismatch");
    IntPoly r(nvars_);
    Exps e(nvars_);
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) {
            for (std::size_t v = 0; v < nvars_; ++v) e[v] = ea[v] + eb[v];
            r.add_term(e, ca * cb);
        }
    return r;
}

IntPoly IntPoly::scaled(const BigInt& c) const {
    IntPoly r(nvars_);
    if (c == 0) return r;
    for (const auto& [e, v] : terms_) r.terms_.emplace(e, v * c);
    return r;
}

IntPoly IntPoly::pow(std::uint64_t e) const {
    IntPoly result = constant(nvars_, 1);
    IntPoly base = *this;
    while (e) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

IntPoly IntPoly::divided_exactly(const BigInt& d) const {
    IntPoly r(nvars_);
    for (const auto& [e, c] : terms_) {
        if (c % d != 0) throw std::logic_error("IntPoly: inexact division by " + d.str());
        r.terms_.emplace(e, c / d);
    }
    return r;
}

std::string IntPoly::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [e, c] : terms_) {
        if (!s.empty()) s += " + ";
        s += c.str();
        for (std::size_t v = 0; v < nvars_; ++v)
            if (e[v]) s += "*v" + std::to_string(v) + (e[v] > 1 ? "^" + std::to_string(e[v]) : "");
    }
    return s;
}

}  // namespace pcris
