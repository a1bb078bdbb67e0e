#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ipw/multivector.hpp"

namespace ipw {

struct InfinitesimalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Conormal section eta = sum_a eta^a dy_a, stored as q y-free coefficients.
using Section = std::vector<Poly>;

/// Fiberwise-affine function f + sum_a eta^a y_a, under the identification
/// with C^inf(S) + conormal sections.
struct AffineElement {
    Poly f;
    Section eta;

    friend bool operator==(const AffineElement& a, const AffineElement& b) {
        return a.f == b.f && a.eta == b.eta;
    }
};

/// The tuple (psi, c, Gamma, K) extracted from an ambient Poisson bivector
/// around the coordinate submanifold S = {y = 0}:
///   psi[i][j]    = pi^{x_i x_j} at y=0              (induced structure on S)
///   c[a][b][e]   = d pi^{y_a y_b} / d y_e at y=0    (fiber bracket [.,.]_1)
///   gamma[i][a][b] = d pi^{x_i y_a} / d y_b at y=0  (connection D)
///   kappa[i][j][a] = d pi^{x_i x_j} / d y_a at y=0  (curvature K)
/// All entries are y-free polynomials on S.
struct InfinitesimalData {
    ContextPtr ctx;
    std::size_t m = 0, q = 0;
    std::vector<std::vector<Poly>> psi;                 // m x m, antisymmetric
    std::vector<std::vector<std::vector<Poly>>> c;      // q x q x q, antisym in (a,b)
    std::vector<std::vector<std::vector<Poly>>> gamma;  // m x q x q
    std::vector<std::vector<std::vector<Poly>>> kappa;  // m x m x q, antisym in (i,j)

    Poly zero() const { return Poly(ctx); }
    Section zero_section() const { return Section(q, Poly(ctx)); }

    Multivector psi_bivector() const {
        Multivector b(ctx, 2, Multivector::Space::OnS);
        for (unsigned i = 0; i < m; ++i)
            for (unsigned j = i + 1; j < m; ++j)
                b.add_term({i, j}, psi[i][j]);
        return b;
    }

    /// Hamiltonian vector field of x_i with respect to psi applied to a
    /// function on S: X_i(f) = psi(dx_i, df).
    Poly transport(std::size_t i, const Poly& f) const {
        Poly r(ctx);
        for (std::size_t j = 0; j < m; ++j) r += psi[i][j] * partial(f, j);
        return r;
    }

    /// psi(df, dg).
    Poly psi_pairing(const Poly& f, const Poly& g) const {
        Poly r(ctx);
        for (std::size_t i = 0; i < m; ++i) r += partial(f, i) * transport(i, g);
        return r;
    }

    /// Fiber bracket [eta, xi]_1, C^inf(S)-bilinear.
    Section fiber_bracket(const Section& eta, const Section& xi) const {
        Section r = zero_section();
        for (std::size_t a = 0; a < q; ++a)
            for (std::size_t b = 0; b < q; ++b) {
                if (eta[a].is_zero() || xi[b].is_zero()) continue;
                for (std::size_t e = 0; e < q; ++e) r[e] += eta[a] * xi[b] * c[a][b][e];
            }
        return r;
    }

    /// D_{dx_i} applied to a section (Leibniz over the transport X_i).
    Section covariant(std::size_t i, const Section& s) const {
        Section r = zero_section();
        for (std::size_t b = 0; b < q; ++b) {
            r[b] += transport(i, s[b]);
            for (std::size_t a = 0; a < q; ++a) r[b] += s[a] * gamma[i][a][b];
        }
        return r;
    }

    /// D_{df}, tensorial in the 1-form argument.
    Section covariant_df(const Poly& f, const Section& s) const {
        Section r = zero_section();
        for (std::size_t i = 0; i < m; ++i) {
            Poly fi = partial(f, i);
            if (fi.is_zero()) continue;
            Section di = covariant(i, s);
            for (std::size_t b = 0; b < q; ++b) r[b] += fi * di[b];
        }
        return r;
    }

    Section kappa_section(std::size_t i, std::size_t j) const {
        Section r = zero_section();
        for (std::size_t a = 0; a < q; ++a) r[a] = kappa[i][j][a];
        return r;
    }

    /// K(df, dg).
    Section kappa_eval(const Poly& f, const Poly& g) const {
        Section r = zero_section();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                if (i == j) continue;
                Poly w = partial(f, i) * partial(g, j);
                if (w.is_zero()) continue;
                for (std::size_t a = 0; a < q; ++a) r[a] += w * kappa[i][j][a];
            }
        return r;
    }

    /// Largest total degree over all stored tensors (0 for all-zero data).
    long long max_data_degree() const {
        long long d = 0;
        auto upd = [&d](const Poly& p) { d = std::max(d, p.degree()); };
        for (const auto& row : psi)
            for (const auto& p : row) upd(p);
        for (const auto& t : {std::cref(this->c), std::cref(gamma), std::cref(kappa)})
            for (const auto& plane : t.get())
                for (const auto& row : plane)
                    for (const auto& p : row) upd(p);
        return d;
    }
};

struct SubmanifoldCheck {
    bool ok = true;
    std::vector<std::pair<std::string, std::string>> offending;
};

///// Poisson-submanifold condition for S = {y = 0}: every component of pi with
/// a normal index must vanish at the zero section.
inline SubmanifoldCheck check_poisson_submanifold(const Multivector& pi, const ContextPtr& ctx) {
    require_same_context(pi.context(), ctx);
    if (pi.grade() != 2) throw InfinitesimalError("expected a bivector");
    SubmanifoldCheck r;
    for (const auto& [t, coeff] : pi.components()) {
        bool has_normal = ctx->is_normal(t[0]) || ctx->is_normal(t[1]);
        if (has_normal && !restrict_to_S(coeff).is_zero()) {
            r.ok = false;
            r.offending.emplace_back(ctx->name(t[0]), ctx->name(t[1]));
        }
    }
    return r;
}

/// Extraction with the coordinate Ehresmann section h(dx_i) = dx_i|_S.
inline InfinitesimalData extract(const Multivector& pi, const ContextPtr& ctx) {
    if (!check_poisson_submanifold(pi, ctx).ok)
        throw InfinitesimalError("S = {y=0} is not a Poisson submanifold of pi");
    InfinitesimalData d;
    d.ctx = ctx;
    d.m = ctx->base_count();
    d.q = ctx->normal_count();
    const std::size_t m = d.m, q = d.q;
    auto comp = [&](std::size_t u, std::size_t v) {
        return pi.coefficient({static_cast<unsigned>(u), static_cast<unsigned>(v)});
    };
    d.psi.assign(m, std::vector<Poly>(m, Poly(ctx)));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) d.psi[i][j] = restrict_to_S(comp(i, j));
    d.c.assign(q, std::vector<std::vector<Poly>>(q, std::vector<Poly>(q, Poly(ctx))));
    for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = 0; b < q; ++b)
            for (std::size_t e = 0; e < q; ++e)
                d.c[a][b][e] = restrict_to_S(partial(comp(m + a, m + b), m + e));
    d.gamma.assign(m, std::vector<std::vector<Poly>>(q, std::vector<Poly>(q, Poly(ctx))));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t a = 0; a < q; ++a)
            for (std::size_t b = 0; b < q; ++b)
                d.gamma[i][a][b] = restrict_to_S(partial(comp(i, m + a), m + b));
    d.kappa.assign(m, std::vector<std::vector<Poly>>(m, std::vector<Poly>(q, Poly(ctx))));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t a = 0; a < q; ++a)
                d.kappa[i][j][a] = restrict_to_S(partial(comp(i, j), m + a));
    return d;
}

struct PTReport {
    bool pt1 = true, pt2 = true, pt3 = true;
    // residual sections, nonempty only on failure; tagged with the generator
    // indices for diagnostics
    std::vector<std::pair<std::string, Section>> residuals;

    bool all() const { return pt1 && pt2 && pt3; }
};

namespace detail {

inline bool section_zero(const Section& s) {
    for (const auto& p : s)
        if (!p.is_zero()) return false;
    return true;
}

inline Section section_sub(const Section& a, const Section& b) {
    Section r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

inline Section section_add(const Section& a, const Section& b) {
    Section r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

inline Section unit_section(const InfinitesimalData& d, std::size_t a) {
    Section s = d.zero_section();
    s[a] = Poly::constant(d.ctx, 1);
    return s;
}

} // namespace detail

/// Symbolic verification of the compatibility relations between D, K and the
/// fiber bracket, on the coordinate generators dx_i, dy_a (sufficient by the
/// Leibniz rules, which the operations realize explicitly).
inline PTReport verify_pt(const InfinitesimalData& d) {
    using namespace detail;
    PTReport rep;
    const std::size_t m = d.m, q = d.q;

    // (PT1)  D_a [eta,xi]_1 = [D_a eta, xi]_1 + [eta, D_a xi]_1
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t a = 0; a < q; ++a)
            for (std::size_t b = a + 1; b < q; ++b) {
                Section lhs = d.covariant(i, d.fiber_bracket(unit_section(d, a), unit_section(d, b)));
                Section rhs = section_add(
                    d.fiber_bracket(d.covariant(i, unit_section(d, a)), unit_section(d, b)),
                    d.fiber_bracket(unit_section(d, a), d.covariant(i, unit_section(d, b))));
                Section res = section_sub(lhs, rhs);
                if (!section_zero(res)) {
                    rep.pt1 = false;
                    rep.residuals.emplace_back(
                        "PT1[" + d.ctx->name(i) + "," + d.ctx->name(m + a) + "," + d.ctx->name(m + b) + "]",
                        res);
                }
            }

    // (PT2)  Curv^D(dx_i, dx_j) = [K(dx_i,dx_j), .]_1
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            for (std::size_t a = 0; a < q; ++a) {
                Section ya = unit_section(d, a);
                Section curv = section_sub(d.covariant(i, d.covariant(j, ya)),
                                           d.covariant(j, d.covariant(i, ya)));
                // minus D over the psi-bracket [dx_i, dx_j]_psi = d(psi^{ij})
                Poly bij = d.psi[i][j];
                for (std::size_t k = 0; k < m; ++k) {
                    Poly w = partial(bij, k);
                    if (w.is_zero()) continue;
                    Section dk = d.covariant(k, ya);
                    for (std::size_t e = 0; e < q; ++e) curv[e] -= w * dk[e];
                }
                Section rhs = d.fiber_bracket(d.kappa_section(i, j), ya);
                Section res = section_sub(curv, rhs);
                if (!section_zero(res)) {
                    rep.pt2 = false;
                    rep.residuals.emplace_back(
                        "PT2[" + d.ctx->name(i) + "," + d.ctx->name(j) + "," + d.ctx->name(m + a) + "]",
                        res);
                }
            }

    // (PT3)  cyclic sum of D_{dx_i} K(dx_j,dx_k) + K(dx_i, [dx_j,dx_k]_psi) = 0
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            for (std::size_t k = j + 1; k < m; ++k) {
                Section acc = d.zero_section();
                std::size_t tri[3][3] = {{i, j, k}, {j, k, i}, {k, i, j}};
                for (auto& t : tri) {
                    acc = section_add(acc, d.covariant(t[0], d.kappa_section(t[1], t[2])));
                    // [dx_j, dx_k]_psi = d(psi^{jk})
                    Poly bjk = d.psi[t[1]][t[2]];
                    for (std::size_t l = 0; l < m; ++l) {
                        Poly w = partial(bjk, l);
                        if (w.is_zero()) continue;
                        for (std::size_t e = 0; e < q; ++e) acc[e] += w * d.kappa[t[0]][l][e];
                    }
                }
                if (!section_zero(acc)) {
                    rep.pt3 = false;
                    rep.residuals.emplace_back(
                        "PT3[" + d.ctx->name(i) + "," + d.ctx->name(j) + "," + d.ctx->name(k) + "]",
                        acc);
                }
            }
    return rep;
}

/// (f + eta) (g + xi) = fg + (f xi + g eta); the fiber-quadratic part is
/// discarded by construction.
inline AffineElement affine_product(const AffineElement& u, const AffineElement& v) {
    AffineElement r;
    r.f = u.f * v.f;
    r.eta.resize(u.eta.size());
    for (std::size_t a = 0; a < u.eta.size(); ++a) r.eta[a] = u.f * v.eta[a] + v.f * u.eta[a];
    return r;
}

/// The affine bracket
///   {f+eta, g+xi} = psi(df,dg) + ( D_{df} xi - D_{dg} eta + [eta,xi]_1 + K(df,dg) ).
inline AffineElement affine_bracket(const InfinitesimalData& d, const AffineElement& u,
                                    const AffineElement& v) {
    using namespace detail;
    AffineElement r;
    r.f = d.psi_pairing(u.f, v.f);
    r.eta = section_add(section_sub(d.covariant_df(u.f, v.eta), d.covariant_df(v.f, u.eta)),
                        section_add(d.fiber_bracket(u.eta, v.eta), d.kappa_eval(u.f, v.f)));
    return r;
}

/// The full ambient Poisson bracket {p, q}_pi.
inline Poly ambient_bracket(const Multivector& pi, const Poly& p, const Poly& q) {
    Poly r(pi.context());
    for (const auto& [t, coeff] : pi.components())
        r += coeff * (partial(p, t[0]) * partial(q, t[1]) - partial(p, t[1]) * partial(q, t[0]));
    return r;
}

/// View an affine element as the polynomial f + sum_a eta^a y_a.
inline Poly affine_to_poly(const ContextPtr& ctx, const AffineElement& u) {
    Poly r = u.f;
    for (std::size_t a = 0; a < u.eta.size(); ++a)
        r += u.eta[a] * Poly::variable(ctx, ctx->base_count() + a);
    return r;
}

/// Inverse of affine_to_poly; requires fiber degree <= 1 with y-free pieces.
inline AffineElement poly_to_affine(const ContextPtr& ctx, const Poly& p) {
    AffineElement u;
    u.f = fiber_component(p, 0);
    u.eta.assign(ctx->normal_count(), Poly(ctx));
    Poly lin = fiber_component(p, 1);
    if (fiber_component(p, 0) + lin != p)
        throw InfinitesimalError("polynomial is not fiberwise affine");
    for (const auto& [e, coeff] : lin.terms()) {
        Exponents base = e;
        std::size_t a = 0;
        for (std::size_t v = ctx->base_count(); v < ctx->total(); ++v)
            if (e[v] == 1) {
                a = v - ctx->base_count();
                base[v] = 0;
            }
        u.eta[a] += Poly::monomial(ctx, base, coeff);
    }
    return u;
}

/// True iff fiber components 0 and 1 of the full bracket {u,v}_pi agree with
/// the affine bracket of the extracted data.
inline bool first_order_check(const Multivector& pi, const ContextPtr& ctx, const AffineElement& u,
                              const AffineElement& v) {
    InfinitesimalData d = extract(pi, ctx);
    Poly full = ambient_bracket(pi, affine_to_poly(ctx, u), affine_to_poly(ctx, v));
    Poly trunc = fiber_component(full, 0) + fiber_component(full, 1);
    Poly aff = affine_to_poly(ctx, affine_bracket(d, u, v));
    return trunc == aff;
}

} // namespace ipw
