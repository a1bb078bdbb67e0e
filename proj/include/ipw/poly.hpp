#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "ipw/context.hpp"
#include "ipw/rational.hpp"

namespace ipw {

struct PolyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Exponents = std::vector<std::uint32_t>;

inline std::uint64_t total_degree(const Exponents& e) {
    return std::accumulate(e.begin(), e.end(), std::uint64_t{0});
}

/// Monomial order used everywhere: graded, ascending total degree; within a
/// degree, lexicographically by exponent vector with earlier variables first
/// (so x1^2 precedes x1*x2 precedes x2^2).
struct MonomialOrder {
    bool operator()(const Exponents& a, const Exponents& b) const {
        auto da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return a > b; // lex-descending exponents within a degree
    }
};

/// Exact multivariate polynomial over the rationals. Immutable in practice:
/// every operation returns a fresh value; no zero coefficients are stored, so
/// equality of maps is equality of polynomials.
class Poly {
public:
    using TermMap = std::map<Exponents, Rational, MonomialOrder>;

    Poly() = default;
    explicit Poly(ContextPtr ctx) : ctx_(std::move(ctx)) {}

    static Poly constant(ContextPtr ctx, Rational c) {
        Poly p(std::move(ctx));
        if (c != 0) p.terms_[Exponents(p.ctx_->total(), 0)] = std::move(c);
        return p;
    }

    static Poly variable(ContextPtr ctx, std::size_t index) {
        Poly p(std::move(ctx));
        Exponents e(p.ctx_->total(), 0);
        e.at(index) = 1;
        p.terms_[std::move(e)] = 1;
        return p;
    }

    static Poly variable(const ContextPtr& ctx, const std::string& name) {
        return variable(ctx, ctx->index_of(name));
    }

    static Poly monomial(ContextPtr ctx, Exponents e, Rational c = 1) {
        Poly p(std::move(ctx));
        if (e.size() != p.ctx_->total()) throw PolyError("exponent vector length mismatch");
        if (c != 0) p.terms_[std::move(e)] = std::move(c);
        return p;
    }

    const ContextPtr& context() const { return ctx_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }

    Rational constant_value() const {
        if (terms_.empty()) return 0;
        auto it = terms_.find(Exponents(ctx_->total(), 0));
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Rational coefficient_at(const Exponents& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    /// Total degree in all variables; -1 for the zero polynomial.
    long long degree() const {
        long long d = -1;
        for (const auto& [e, c] : terms_) d = std::max<long long>(d, (long long)total_degree(e));
        return d;
    }

    /// Sum of normal-variable exponents of a monomial.
    std::uint64_t fiber_degree(const Exponents& e) const {
        std::uint64_t d = 0;
        for (std::size_t i = ctx_->base_count(); i < e.size(); ++i) d += e[i];
        return d;
    }

    bool is_y_free() const {
        for (const auto& [e, c] : terms_)
            if (fiber_degree(e) != 0) return false;
        return true;
    }

    bool is_homogeneous(std::uint64_t deg) const {
        for (const auto& [e, c] : terms_)
            if (total_degree(e) != deg) return false;
        return true;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly operator-() const {
        Poly r = *this;
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        require_compatible(a, b);
        Poly r = a;
        if (!r.ctx_) r.ctx_ = b.ctx_;
        for (const auto& [e, c] : b.terms_) {
            auto [it, inserted] = r.terms_.try_emplace(e, c);
            if (!inserted) {
                it->second += c;
                if (it->second == 0) r.terms_.erase(it);
            }
        }
        return r;
    }

    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

    friend Poly operator*(const Poly& a, const Poly& b) {
        require_compatible(a, b);
        Poly r(a.ctx_ ? a.ctx_ : b.ctx_);
        const unsigned cap = r.ctx_ ? r.ctx_->exponent_cap() : 64;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e(ea.size());
                for (std::size_t i = 0; i < e.size(); ++i) {
                    e[i] = ea[i] + eb[i];
                    if (e[i] > cap)
                        throw PolyError("exponent cap exceeded (runaway symbolic growth?)");
                }
                Rational c = ca * cb;
                auto [it, inserted] = r.terms_.try_emplace(std::move(e), c);
                if (!inserted) {
                    it->second += c;
                    if (it->second == 0) r.terms_.erase(it);
                }
            }
        return r;
    }

    friend Poly operator*(const Poly& a, const Rational& s) {
        Poly r(a.ctx_);
        if (s == 0) return r;
        r.terms_ = a.terms_;
        for (auto& [e, c] : r.terms_) c *= s;
        return r;
    }
    friend Poly operator*(const Rational& s, const Poly& a) { return a * s; }

    Poly& operator+=(const Poly& b) { return *this = *this + b; }
    Poly& operator-=(const Poly& b) { return *this = *this - b; }
    Poly& operator*=(const Poly& b) { return *this = *this * b; }

    Poly pow(unsigned k) const {
        if (!ctx_) throw PolyError("pow on context-free polynomial");
        Poly r = constant(ctx_, 1);
        for (unsigned i = 0; i < k; ++i) r = r * *this;
        return r;
    }

private:
    static void require_compatible(const Poly& a, const Poly& b) {
        if (a.ctx_ && b.ctx_) require_same_context(a.ctx_, b.ctx_);
    }

    ContextPtr ctx_;
    TermMap terms_;
};

/// Formal partial derivative with respect to a declared variable.
inline Poly partial(const Poly& p, std::size_t var) {
    Poly r(p.context());
    for (const auto& [e, c] : p.terms()) {
        if (e.at(var) == 0) continue;
        Exponents d = e;
        Rational k = d[var];
        d[var] -= 1;
        r += Poly::monomial(p.context(), std::move(d), c * k);
    }
    return r;
}

inline Poly partial(const Poly& p, const std::string& var) {
    return partial(p, p.context()->index_of(var));
}

/// Evaluation at the zero section: every normal variable set to 0.
inline Poly restrict_to_S(const Poly& p) {
    Poly r(p.context());
    for (const auto& [e, c] : p.terms())
        if (p.fiber_degree(e) == 0) r += Poly::monomial(p.context(), e, c);
    return r;
}

/// Sum of the monomials of fiber-degree exactly k.
inline Poly fiber_component(const Poly& p, std::uint64_t k) {
    Poly r(p.context());
    for (const auto& [e, c] : p.terms())
        if (p.fiber_degree(e) == k) r += Poly::monomial(p.context(), e, c);
    return r;
}

/// Canonical printer: terms in graded order, explicit `*` and `^`.
inline std::string to_string(const Poly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
        Rational a = c;
        if (first) {
            if (a < 0) { out << "-"; a = -a; }
        } else {
            out << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        std::string vars;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!vars.empty()) vars += "*";
            vars += p.context()->name(i);
            if (e[i] > 1) vars += "^" + std::to_string(e[i]);
        }
        if (vars.empty()) {
            out << a;
        } else if (a == 1) {
            out << vars;
        } else {
            out << a << "*" << vars;
        }
    }
    return out.str();
}

} // namespace ipw
