#pragma once

#include <map>
#include <utility>
#include <vector>

#include "ipw/poly.hpp"

namespace ipw {

struct MultivectorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using IndexTuple = std::vector<unsigned>;

namespace detail {

/// Sort a tuple of coordinate indices, returning the permutation sign.
/// Returns 0 for a repeated index.
inline int sort_tuple(IndexTuple& t) {
    int sign = 1;
    for (std::size_t i = 1; i < t.size(); ++i)
        for (std::size_t j = i; j > 0 && t[j - 1] >= t[j]; --j) {
            if (t[j - 1] == t[j]) return 0;
            std::swap(t[j - 1], t[j]);
            sign = -sign;
        }
    return sign;
}

} // namespace detail

/// Antisymmetric k-vector field with Poly coefficients, stored sparsely on
/// strictly increasing index tuples. `OnS` restricts indices and coefficients
/// to the base variables.
class Multivector {
public:
    enum class Space { Ambient, OnS };

    Multivector(ContextPtr ctx, unsigned grade, Space space = Space::Ambient)
        : ctx_(std::move(ctx)), grade_(grade), space_(space) {}

    static Multivector scalar(const ContextPtr& ctx, Poly p, Space space = Space::Ambient) {
        Multivector r(ctx, 0, space);
        r.add_term({}, std::move(p));
        return r;
    }

    const ContextPtr& context() const { return ctx_; }
    unsigned grade() const { return grade_; }
    Space space() const { return space_; }
    std::size_t coord_count() const {
        return space_ == Space::Ambient ? ctx_->total() : ctx_->base_count();
    }
    const std::map<IndexTuple, Poly>& components() const { return comps_; }
    bool is_zero() const { return comps_.empty(); }

    /// Accumulate coeff · ∂_{t1} ∧ … ∧ ∂_{tk}; the tuple need not be sorted.
    void add_term(IndexTuple t, Poly coeff) {
        if (t.size() != grade_) throw MultivectorError("index tuple does not match grade");
        int sign = detail::sort_tuple(t);
        if (sign == 0 || coeff.is_zero()) return;
        for (unsigned i : t)
            if (i >= coord_count()) throw MultivectorError("coordinate index out of range");
        if (space_ == Space::OnS && !coeff.is_y_free())
            throw MultivectorError("multivector on S must have y-free coefficients");
        Poly add = sign > 0 ? std::move(coeff) : -coeff;
        auto [it, inserted] = comps_.try_emplace(std::move(t), add);
        if (!inserted) {
            it->second += add;
            if (it->second.is_zero()) comps_.erase(it);
        }
    }

    /// Coefficient on a sorted tuple (zero if absent); arbitrary tuple order
    /// is resolved by antisymmetry.
    Poly coefficient(IndexTuple t) const {
        int sign = detail::sort_tuple(t);
        if (sign == 0) return Poly(ctx_);
        auto it = comps_.find(t);
        if (it == comps_.end()) return Poly(ctx_);
        return sign > 0 ? it->second : -it->second;
    }

    friend bool operator==(const Multivector& a, const Multivector& b) {
        if (a.comps_.empty() && b.comps_.empty()) return a.space_ == b.space_;
        return a.grade_ == b.grade_ && a.space_ == b.space_ && a.comps_ == b.comps_;
    }

    Multivector operator-() const {
        Multivector r(ctx_, grade_, space_);
        for (const auto& [t, c] : comps_) r.comps_[t] = -c;
        return r;
    }

    friend Multivector operator+(const Multivector& a, const Multivector& b) {
        require_same_context(a.ctx_, b.ctx_);
        if (b.comps_.empty() && a.space_ == b.space_) return a;
        if (a.comps_.empty() && a.space_ == b.space_) return b;
        if (a.grade_ != b.grade_ || a.space_ != b.space_)
            throw MultivectorError("grade/space mismatch in multivector sum");
        Multivector r = a;
        for (const auto& [t, c] : b.comps_) r.add_term(t, c);
        return r;
    }
    friend Multivector operator-(const Multivector& a, const Multivector& b) { return a + (-b); }
    Multivector& operator+=(const Multivector& b) { return *this = *this + b; }

    friend Multivector operator*(const Poly& f, const Multivector& a) {
        Multivector r(a.ctx_, a.grade_, a.space_);
        for (const auto& [t, c] : a.comps_) r.add_term(t, f * c);
        return r;
    }
    friend Multivector operator*(const Rational& s, const Multivector& a) {
        Multivector r(a.ctx_, a.grade_, a.space_);
        for (const auto& [t, c] : a.comps_) r.add_term(t, c * s);
        return r;
    }

private:
    ContextPtr ctx_;
    unsigned grade_;
    Space space_;
    std::map<IndexTuple, Poly> comps_;
};

inline Multivector wedge(const Multivector& a, const Multivector& b) {
    require_same_context(a.context(), b.context());
    if (a.space() != b.space()) throw MultivectorError("space mismatch in wedge");
    Multivector r(a.context(), a.grade() + b.grade(), a.space());
    for (const auto& [ta, ca] : a.components())
        for (const auto& [tb, cb] : b.components()) {
            IndexTuple t = ta;
            t.insert(t.end(), tb.begin(), tb.end());
            r.add_term(std::move(t), ca * cb);
        }
    return r;
}

namespace detail {

inline IndexTuple drop(const IndexTuple& t, std::size_t pos) {
    IndexTuple r;
    r.reserve(t.size() - 1);
    for (std::size_t j = 0; j < t.size(); ++j)
        if (j != pos) r.push_back(t[j]);
    return r;
}

/// [a θ_I, f] = Σ_i (-1)^{p-i} a (∂_{I_i} f) θ_{I \ i}   (i 1-based).
inline void schouten_with_scalar(Multivector& acc, const IndexTuple& t, const Poly& a,
                                 const Poly& f) {
    const std::size_t p = t.size();
    for (std::size_t i = 0; i < p; ++i) {
        Poly c = a * partial(f, t[i]);
        if (((p - 1 - i) % 2) != 0) c = -c;
        acc.add_term(drop(t, i), std::move(c));
    }
}

/// Term-pair bracket via the classical decomposable formula
/// [X_1∧…∧X_p, Y_1∧…∧Y_q] = Σ_{i,j} (-1)^{i+j} [X_i,Y_j] ∧ rest,
/// with the coefficient attached to the first factor of each term.
inline void schouten_term_pair(Multivector& acc, const IndexTuple& ta, const Poly& ca,
                               const IndexTuple& tb, const Poly& cb) {
    const auto& ctx = acc.context();
    for (std::size_t i = 0; i < ta.size(); ++i) {
        for (std::size_t j = 0; j < tb.size(); ++j) {
            if (i > 0 && j > 0) continue; // both factors constant-coefficient
            bool neg = ((i + j) % 2) != 0;
            IndexTuple rest = drop(ta, i);
            IndexTuple rb = drop(tb, j);
            rest.insert(rest.end(), rb.begin(), rb.end());
            const Poly& cu = ca; // coefficient rides factor 0 only
            const Poly& cv = cb;
            // [u, v] for u = cu?∂_{ta[i]}, v = cv?∂_{tb[j]}
            if (j == 0) {
                Poly c1 = (i == 0 ? cu : Poly::constant(ctx, 1)) * partial(cv, ta[i]);
                if (i > 0) c1 = c1 * cu; // cu stays in the rest
                IndexTuple t1 = rest;
                t1.insert(t1.begin(), tb[j]);
                acc.add_term(std::move(t1), neg ? -c1 : c1);
            }
            if (i == 0) {
                Poly c2 = -((j == 0 ? cv : Poly::constant(ctx, 1)) * partial(cu, tb[j]));
                if (j > 0) c2 = c2 * cv;
                IndexTuple t2 = rest;
                t2.insert(t2.begin(), ta[i]);
                acc.add_term(std::move(t2), neg ? -c2 : c2);
            }
        }
    }
}

} // namespace detail

/// Schouten–Nijenhuis bracket. Convention fixed by: [X,Y] is the Lie bracket
/// of vector fields, [X,f] = X(f), and graded antisymmetry
/// [a,b] = -(-1)^{(k-1)(l-1)}[b,a].
inline Multivector schouten(const Multivector& a, const Multivector& b) {
    require_same_context(a.context(), b.context());
    if (a.space() != b.space()) throw MultivectorError("space mismatch in schouten bracket");
    const unsigned k = a.grade(), l = b.grade();
    unsigned target = (k + l == 0) ? 0 : k + l - 1;
    Multivector acc(a.context(), target, a.space());
    if (k + l == 0) return acc;
    if (l == 0) {
        for (const auto& [ta, ca] : a.components())
            for (const auto& [tb, cb] : b.components())
                detail::schouten_with_scalar(acc, ta, ca, cb);
        return acc;
    }
    if (k == 0) {
        // by graded antisymmetry: [f,B] = -(-1)^{(0-1)(l-1)} [B,f]
        Multivector r = schouten(b, a);
        bool flip = ((l - 1) % 2) == 0;
        return flip ? -r : r;
    }
    for (const auto& [ta, ca] : a.components())
        for (const auto& [tb, cb] : b.components())
            detail::schouten_term_pair(acc, ta, ca, tb, cb);
    return acc;
}

struct JacobiResult {
    bool holds;
    Multivector residual; // [pi, pi], a trivector
};

/// True iff the bivector is Poisson: its Schouten self-bracket vanishes.
inline JacobiResult jacobi_check(const Multivector& pi) {
    if (pi.grade() != 2) throw MultivectorError("jacobi_check expects a bivector");
    Multivector r = schouten(pi, pi);
    return {r.is_zero(), r};
}

/// Lichnerowicz differential of the Poisson bivector psi. The sign is chosen
/// so that on functions d f is the Hamiltonian vector field X_f = {f, .}.
inline Multivector lichnerowicz_d(const Multivector& psi, const Multivector& a,
                                  bool verify_jacobi = true) {
    if (verify_jacobi && !jacobi_check(psi).holds)
        throw MultivectorError("bivector is not Poisson; refusing to build the complex");
    return -schouten(psi, a);
}

} // namespace ipw
