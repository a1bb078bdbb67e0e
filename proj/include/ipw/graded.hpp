#pragma once

#include <functional>
#include <map>
#include <utility>

#include "ipw/linalg.hpp"
#include "ipw/poly.hpp"

namespace ipw {
namespace graded {

/// Monomials in the base variables of exact total degree `deg`, as full-length
/// exponent vectors (normal part zero), sorted in the canonical MonomialOrder.
inline std::vector<Exponents> base_monomials(const ContextPtr& ctx, long long deg) {
    std::vector<Exponents> out;
    if (deg < 0) return out;
    const std::size_t m = ctx->base_count();
    Exponents cur(ctx->total(), 0);
    std::function<void(std::size_t, long long)> rec = [&](std::size_t var, long long rem) {
        if (var == m) {
            if (rem == 0) out.push_back(cur);
            return;
        }
        if (var + 1 == m) {
            cur[var] = static_cast<std::uint32_t>(rem);
            out.push_back(cur);
            cur[var] = 0;
            return;
        }
        for (long long e = 0; e <= rem; ++e) {
            cur[var] = static_cast<std::uint32_t>(e);
            rec(var + 1, rem - e);
        }
        cur[var] = 0;
    };
    rec(0, deg);
    std::sort(out.begin(), out.end(), MonomialOrder{});
    return out;
}

/// Abstract element of a finite-dimensional graded unknown space: one y-free
/// polynomial per component slot.
using Element = std::vector<Poly>;

/// A linear constraint map: element -> residual polynomials. Must be linear
/// with F(0) = 0 for the matrix construction below to be valid.
using ResidualFn = std::function<std::vector<Poly>(const Element&)>;

/// Monomial basis of an unknown space: components with per-component degree
/// ranges. Entry order is deterministic (component-major, MonomialOrder).
struct Basis {
    ContextPtr ctx;
    std::size_t comps = 0;
    std::vector<std::pair<std::size_t, Exponents>> entries;
    std::map<std::pair<std::size_t, Exponents>, std::size_t> lookup;

    void add_component(long long lo, long long hi) {
        for (long long d = std::max<long long>(0, lo); d <= hi; ++d)
            for (auto& e : base_monomials(ctx, d)) {
                lookup[{comps, e}] = entries.size();
                entries.emplace_back(comps, e);
            }
        ++comps;
    }

    std::size_t size() const { return entries.size(); }

    Element unit(std::size_t k) const {
        Element el(comps, Poly(ctx));
        el[entries[k].first] = Poly::monomial(ctx, entries[k].second);
        return el;
    }

    Element from_coords(const std::vector<Rational>& v) const {
        Element el(comps, Poly(ctx));
        for (std::size_t k = 0; k < entries.size(); ++k)
            if (v[k] != 0) el[entries[k].first] += Poly::monomial(ctx, entries[k].second, v[k]);
        return el;
    }
};

inline Basis make_basis(const ContextPtr& ctx,
                        const std::vector<std::pair<long long, long long>>& comp_degrees) {
    Basis b;
    b.ctx = ctx;
    for (auto& [lo, hi] : comp_degrees) b.add_component(lo, hi);
    return b;
}

inline bool residual_is_zero(const std::vector<Poly>& res) {
    for (const auto& p : res)
        if (!p.is_zero()) return false;
    return true;
}

/// Nullspace of the constraint map restricted to the span of `basis`. Residual
/// coordinates (equation index, monomial) are discovered from the columns.
inline std::vector<std::vector<Rational>> kernel(const Basis& basis, const ResidualFn& F) {
    std::map<std::pair<std::size_t, Exponents>, std::size_t> rows;
    std::vector<std::map<std::size_t, Rational>> cols(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) {
        std::vector<Poly> res = F(basis.unit(k));
        for (std::size_t i = 0; i < res.size(); ++i)
            for (const auto& [e, cf] : res[i].terms()) {
                auto [it, ins] = rows.try_emplace({i, e}, rows.size());
                cols[k][it->second] = cf;
            }
    }
    RatMatrix m(rows.size(), basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k)
        for (const auto& [r, cf] : cols[k]) m.at(r, k) = cf;
    return nullspace(m);
}

/// Span of a family of elements relative to a basis window. Support outside
/// the window is tracked in extra coordinates, so intersections with the
/// window (and with coordinate subspaces) come out of two rank computations.
struct GenSpan {
    const Basis* basis;
    std::vector<std::vector<Rational>> in;
    std::vector<std::map<std::pair<std::size_t, Exponents>, Rational>> out;

    explicit GenSpan(const Basis& b) : basis(&b) {}

    void add(const Element& el) {
        std::vector<Rational> v(basis->size(), Rational(0));
        std::map<std::pair<std::size_t, Exponents>, Rational> extra;
        for (std::size_t c = 0; c < el.size(); ++c)
            for (const auto& [e, cf] : el[c].terms()) {
                auto it = basis->lookup.find({c, e});
                if (it != basis->lookup.end())
                    v[it->second] = cf;
                else
                    extra[{c, e}] = cf;
            }
        in.push_back(std::move(v));
        out.push_back(std::move(extra));
    }

    /// dim of the intersection of the span with the subspace where only the
    /// basis components selected by `keep` may be nonzero. Out-of-window
    /// support always counts as "must vanish".
    std::size_t dim_within(const std::function<bool(std::size_t comp)>& keep) const {
        if (in.empty()) return 0;
        std::map<std::pair<std::size_t, Exponents>, std::size_t> extra_cols;
        for (const auto& o : out)
            for (const auto& [key, cf] : o) extra_cols.try_emplace(key, extra_cols.size());
        const std::size_t B = basis->size(), X = extra_cols.size();
        RatMatrix full(in.size(), B + X);
        RatMatrix kill(in.size(), 0);
        std::vector<std::size_t> kill_cols;
        for (std::size_t c = 0; c < B; ++c)
            if (!keep(basis->entries[c].first)) kill_cols.push_back(c);
        kill = RatMatrix(in.size(), kill_cols.size() + X);
        for (std::size_t r = 0; r < in.size(); ++r) {
            for (std::size_t c = 0; c < B; ++c) full.at(r, c) = in[r][c];
            for (const auto& [key, cf] : out[r]) full.at(r, B + extra_cols[key]) = cf;
            for (std::size_t kc = 0; kc < kill_cols.size(); ++kc)
                kill.at(r, kc) = in[r][kill_cols[kc]];
            for (const auto& [key, cf] : out[r])
                kill.at(r, kill_cols.size() + extra_cols[key]) = cf;
        }
        return rank(full) - rank(kill);
    }

    /// dim of the intersection of the span with the basis window.
    std::size_t window_dim() const {
        return dim_within([](std::size_t) { return true; });
    }
};

/// dim of the span of coordinate vectors restricted to the basis components
/// selected by `keep`.
inline std::size_t projected_span(const Basis& basis, const std::vector<std::vector<Rational>>& vecs,
                                  const std::function<bool(std::size_t comp)>& keep) {
    if (vecs.empty()) return 0;
    std::vector<std::size_t> sel;
    for (std::size_t c = 0; c < basis.size(); ++c)
        if (keep(basis.entries[c].first)) sel.push_back(c);
    RatMatrix m(vecs.size(), sel.size());
    for (std::size_t r = 0; r < vecs.size(); ++r)
        for (std::size_t c = 0; c < sel.size(); ++c) m.at(r, c) = vecs[r][sel[c]];
    return rank(m);
}

} // namespace graded
} // namespace ipw
