#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ipw/infinitesimal.hpp"
#include "ipw/parse.hpp"

using namespace ipw;

namespace {

Poly P(const ContextPtr& c, const std::string& s) { return parse_poly(s, c); }

// pi = (1 + y1) d/dx1 ^ d/dx2 on (x1, x2; y1)
struct AffineLine {
    ContextPtr ctx = make_context({"x1", "x2"}, {"y1"});
    Multivector pi{ctx, 2};
    AffineLine() { pi.add_term({0, 1}, P(ctx, "1 + y1")); }
};

// Lie-Poisson so(3) on (; y1, y2, y3), S = origin
struct So3 {
    ContextPtr ctx = make_context({}, {"y1", "y2", "y3"});
    Multivector pi{ctx, 2};
    So3() {
        pi.add_term({0, 1}, P(ctx, "y3"));
        pi.add_term({1, 2}, P(ctx, "y1"));
        pi.add_term({2, 0}, P(ctx, "y2"));
    }
};

// pi = d/dx1 ^ d/dx2 + y1 d/dx1 ^ d/dy1 on (x1, x2; y1): nonzero Gamma
struct Rank1Gamma {
    ContextPtr ctx = make_context({"x1", "x2"}, {"y1"});
    Multivector pi{ctx, 2};
    Rank1Gamma() {
        pi.add_term({0, 1}, P(ctx, "1"));
        pi.add_term({0, 2}, P(ctx, "y1"));
    }
};

// dual of the Lie algebra [e1,e2]=f1, [e1,f1]=f1 with S the annihilator of
// the ideal spanned by f1: nonzero Gamma and K at once
struct NilAff {
    ContextPtr ctx = make_context({"x1", "x2"}, {"y1"});
    Multivector pi{ctx, 2};
    NilAff() {
        pi.add_term({0, 1}, P(ctx, "y1"));
        pi.add_term({0, 2}, P(ctx, "y1"));
    }
};

AffineElement affine(const ContextPtr& c, const std::string& f,
                     std::vector<std::string> eta = {}) {
    AffineElement u;
    u.f = P(c, f);
    u.eta.assign(c->normal_count(), Poly(c));
    for (std::size_t a = 0; a < eta.size(); ++a) u.eta[a] = P(c, eta[a]);
    return u;
}

Poly random_y_free(const ContextPtr& c, std::mt19937& rng) {
    std::uniform_int_distribution<int> expo(0, 2);
    std::uniform_int_distribution<int> coef(-2, 2);
    Poly p(c);
    for (int t = 0; t < 2; ++t) {
        Exponents e(c->total(), 0);
        for (std::size_t i = 0; i < c->base_count(); ++i)
            e[i] = static_cast<std::uint32_t>(expo(rng));
        p += Poly::monomial(c, e, coef(rng));
    }
    return p;
}

AffineElement random_affine(const ContextPtr& c, std::mt19937& rng) {
    AffineElement u;
    u.f = random_y_free(c, rng);
    u.eta.assign(c->normal_count(), Poly(c));
    for (auto& e : u.eta) e = random_y_free(c, rng);
    return u;
}

// ---- independent component-level oracles for the PT identities ----

Poly X(const InfinitesimalData& d, std::size_t i, const Poly& f) {
    Poly r(d.ctx);
    for (std::size_t j = 0; j < d.m; ++j) r += d.psi[i][j] * partial(f, j);
    return r;
}

Poly pt1_oracle(const InfinitesimalData& d, std::size_t i, std::size_t a, std::size_t b,
                std::size_t e) {
    Poly r = X(d, i, d.c[a][b][e]);
    for (std::size_t cc = 0; cc < d.q; ++cc) r += d.c[a][b][cc] * d.gamma[i][cc][e];
    for (std::size_t dd = 0; dd < d.q; ++dd) r -= d.gamma[i][a][dd] * d.c[dd][b][e];
    for (std::size_t dd = 0; dd < d.q; ++dd) r -= d.gamma[i][b][dd] * d.c[a][dd][e];
    return r;
}

Poly pt2_oracle(const InfinitesimalData& d, std::size_t i, std::size_t j, std::size_t a,
                std::size_t cc) {
    Poly r = X(d, i, d.gamma[j][a][cc]) - X(d, j, d.gamma[i][a][cc]);
    for (std::size_t b = 0; b < d.q; ++b)
        r += d.gamma[j][a][b] * d.gamma[i][b][cc] - d.gamma[i][a][b] * d.gamma[j][b][cc];
    for (std::size_t k = 0; k < d.m; ++k) r -= partial(d.psi[i][j], k) * d.gamma[k][a][cc];
    for (std::size_t b = 0; b < d.q; ++b) r -= d.kappa[i][j][b] * d.c[b][a][cc];
    return r;
}

Poly pt3_oracle(const InfinitesimalData& d, std::size_t i, std::size_t j, std::size_t k,
                std::size_t a) {
    Poly r(d.ctx);
    std::size_t tri[3][3] = {{i, j, k}, {j, k, i}, {k, i, j}};
    for (auto& t : tri) {
        r += X(d, t[0], d.kappa[t[1]][t[2]][a]);
        for (std::size_t b = 0; b < d.q; ++b) r += d.kappa[t[1]][t[2]][b] * d.gamma[t[0]][b][a];
        for (std::size_t l = 0; l < d.m; ++l)
            r += partial(d.psi[t[1]][t[2]], l) * d.kappa[t[0]][l][a];
    }
    return r;
}

bool pt_oracles_hold(const InfinitesimalData& d) {
    for (std::size_t i = 0; i < d.m; ++i)
        for (std::size_t a = 0; a < d.q; ++a)
            for (std::size_t b = 0; b < d.q; ++b)
                for (std::size_t e = 0; e < d.q; ++e)
                    if (!pt1_oracle(d, i, a, b, e).is_zero()) return false;
    for (std::size_t i = 0; i < d.m; ++i)
        for (std::size_t j = 0; j < d.m; ++j)
            for (std::size_t a = 0; a < d.q; ++a)
                for (std::size_t cc = 0; cc < d.q; ++cc)
                    if (!pt2_oracle(d, i, j, a, cc).is_zero()) return false;
    for (std::size_t i = 0; i < d.m; ++i)
        for (std::size_t j = 0; j < d.m; ++j)
            for (std::size_t k = 0; k < d.m; ++k)
                for (std::size_t a = 0; a < d.q; ++a)
                    if (!pt3_oracle(d, i, j, k, a).is_zero()) return false;
    return true;
}

} // namespace

TEST_CASE("extraction golden values") {
    SECTION("affine line") {
        AffineLine ex;
        auto d = extract(ex.pi, ex.ctx);
        REQUIRE(d.m == 2);
        REQUIRE(d.q == 1);
        CHECK(d.psi[0][1] == P(ex.ctx, "1"));
        CHECK(d.psi[1][0] == P(ex.ctx, "-1"));
        CHECK(d.kappa[0][1][0] == P(ex.ctx, "1"));
        CHECK(d.gamma[0][0][0].is_zero());
        CHECK(d.gamma[1][0][0].is_zero());
        CHECK(d.c[0][0][0].is_zero());
    }
    SECTION("so(3): c recovers the structure constants") {
        So3 ex;
        auto d = extract(ex.pi, ex.ctx);
        REQUIRE(d.m == 0);
        REQUIRE(d.q == 3);
        Poly one = P(ex.ctx, "1");
        CHECK(d.c[0][1][2] == one);
        CHECK(d.c[1][0][2] == -one);
        CHECK(d.c[1][2][0] == one);
        CHECK(d.c[2][0][1] == one);
        CHECK(d.c[0][1][0].is_zero());
        CHECK(d.c[0][0][0].is_zero());
    }
    SECTION("rank-one Gamma") {
        Rank1Gamma ex;
        auto d = extract(ex.pi, ex.ctx);
        CHECK(d.psi[0][1] == P(ex.ctx, "1"));
        CHECK(d.gamma[0][0][0] == P(ex.ctx, "1")); // from pi^{x1,y1} = y1
        CHECK(d.gamma[1][0][0].is_zero());
        CHECK(d.kappa[0][1][0].is_zero());
    }
    SECTION("nil-affine: Gamma and K together") {
        NilAff ex;
        auto d = extract(ex.pi, ex.ctx);
        CHECK(d.psi[0][1].is_zero());
        CHECK(d.kappa[0][1][0] == P(ex.ctx, "1"));
        CHECK(d.gamma[0][0][0] == P(ex.ctx, "1"));
        CHECK(d.gamma[1][0][0].is_zero());
    }
}

TEST_CASE("poisson submanifold detection") {
    auto ctx = make_context({"x1"}, {"y1"});
    Multivector pi(ctx, 2);
    pi.add_term({0, 1}, P(ctx, "1")); // {x1, y1} = 1 does not preserve the ideal
    auto chk = check_poisson_submanifold(pi, ctx);
    CHECK_FALSE(chk.ok);
    REQUIRE(chk.offending.size() == 1);
    CHECK(chk.offending[0] == std::make_pair(std::string("x1"), std::string("y1")));
    CHECK_THROWS_AS(extract(pi, ctx), InfinitesimalError);

    // so(3) around a coordinate axis: {y1, y2} = x1 obstructs
    auto cax = make_context({"x1"}, {"y1", "y2"});
    Multivector pax(cax, 2);
    pax.add_term({0, 1}, P(cax, "y2"));
    pax.add_term({2, 0}, P(cax, "y1"));
    pax.add_term({1, 2}, P(cax, "x1"));
    auto chk2 = check_poisson_submanifold(pax, cax);
    CHECK_FALSE(chk2.ok);
    REQUIRE(chk2.offending.size() == 1);
    CHECK(chk2.offending[0] == std::make_pair(std::string("y1"), std::string("y2")));
}

TEST_CASE("structure identities hold on the examples and match the oracle") {
    AffineLine a;
    So3 s;
    Rank1Gamma r;
    NilAff n;
    for (const auto* pi : {&a.pi, &s.pi, &r.pi, &n.pi}) {
        REQUIRE(jacobi_check(*pi).holds);
        auto d = extract(*pi, pi->context());
        auto rep = verify_pt(d);
        CHECK(rep.pt1);
        CHECK(rep.pt2);
        CHECK(rep.pt3);
        CHECK(rep.residuals.empty());
        CHECK(pt_oracles_hold(d));
    }
}

TEST_CASE("corrupted data fails the identities, in both implementations") {
    Rank1Gamma ex;
    auto d = extract(ex.pi, ex.ctx);
    d.gamma[0][0][0] = P(ex.ctx, "x1"); // breaks flatness of D
    auto rep = verify_pt(d);
    CHECK_FALSE(rep.pt2);
    CHECK_FALSE(rep.residuals.empty());
    CHECK_FALSE(pt_oracles_hold(d));

    So3 s;
    auto ds = extract(s.pi, s.ctx);
    ds.c[0][1][2] += P(s.ctx, "1"); // m = 0: all PT identities are vacuous
    CHECK(verify_pt(ds).all());
}

TEST_CASE("affine bracket golden values") {
    SECTION("affine line: {x1, x2} = 1 + dy1") {
        AffineLine ex;
        auto d = extract(ex.pi, ex.ctx);
        AffineElement b = affine_bracket(d, affine(ex.ctx, "x1"), affine(ex.ctx, "x2"));
        CHECK(b.f == P(ex.ctx, "1"));
        CHECK(b.eta[0] == P(ex.ctx, "1"));
        CHECK(to_string(affine_to_poly(ex.ctx, b)) == "1 + y1");
    }
    SECTION("so(3): {dy1, dy2} = dy3") {
        So3 ex;
        auto d = extract(ex.pi, ex.ctx);
        AffineElement b =
            affine_bracket(d, affine(ex.ctx, "0", {"1"}), affine(ex.ctx, "0", {"0", "1"}));
        CHECK(b.f.is_zero());
        CHECK(b.eta[0].is_zero());
        CHECK(b.eta[1].is_zero());
        CHECK(b.eta[2] == P(ex.ctx, "1"));
    }
    SECTION("rank-one Gamma: {x1, dy1} = dy1") {
        Rank1Gamma ex;
        auto d = extract(ex.pi, ex.ctx);
        AffineElement b = affine_bracket(d, affine(ex.ctx, "x1"), affine(ex.ctx, "0", {"1"}));
        CHECK(b.f.is_zero());
        CHECK(b.eta[0] == P(ex.ctx, "1"));
    }
    SECTION("pure base split q = 0 reduces to the psi bracket") {
        auto ctx = make_context({"x1", "x2", "x3"}, {});
        Multivector pi(ctx, 2);
        pi.add_term({0, 1}, P(ctx, "x3"));
        pi.add_term({1, 2}, P(ctx, "x1"));
        pi.add_term({2, 0}, P(ctx, "x2"));
        auto d = extract(pi, ctx);
        AffineElement b = affine_bracket(d, affine(ctx, "x1"), affine(ctx, "x2"));
        CHECK(b.f == P(ctx, "x3"));
        CHECK(b.eta.empty());
    }
}

TEST_CASE("affine bracket is a Poisson bracket for the truncated product") {
    std::mt19937 rng(47);
    AffineLine a;
    Rank1Gamma r;
    NilAff n;
    So3 s;
    std::vector<const Multivector*> pis = {&a.pi, &r.pi, &n.pi, &s.pi};
    for (const auto* pi : pis) {
        auto ctx = pi->context();
        auto d = extract(*pi, ctx);
        for (int t = 0; t < 8; ++t) {
            AffineElement u = random_affine(ctx, rng);
            AffineElement v = random_affine(ctx, rng);
            AffineElement w = random_affine(ctx, rng);

            // antisymmetry
            AffineElement uv = affine_bracket(d, u, v);
            AffineElement vu = affine_bracket(d, v, u);
            CHECK(uv.f == -vu.f);
            for (std::size_t k = 0; k < uv.eta.size(); ++k) CHECK(uv.eta[k] == -vu.eta[k]);

            // Leibniz: {u, vw} = {u,v} w + v {u,w}
            AffineElement lhs = affine_bracket(d, u, affine_product(v, w));
            AffineElement rhs_sum;
            {
                AffineElement t1 = affine_product(affine_bracket(d, u, v), w);
                AffineElement t2 = affine_product(v, affine_bracket(d, u, w));
                rhs_sum.f = t1.f + t2.f;
                rhs_sum.eta.resize(t1.eta.size());
                for (std::size_t k = 0; k < t1.eta.size(); ++k)
                    rhs_sum.eta[k] = t1.eta[k] + t2.eta[k];
            }
            CHECK(lhs == rhs_sum);

            // Jacobi
            AffineElement j1 = affine_bracket(d, u, affine_bracket(d, v, w));
            AffineElement j2 = affine_bracket(d, v, affine_bracket(d, w, u));
            AffineElement j3 = affine_bracket(d, w, affine_bracket(d, u, v));
            Poly jf = j1.f + j2.f + j3.f;
            CHECK(jf.is_zero());
            for (std::size_t k = 0; k < j1.eta.size(); ++k)
                CHECK((j1.eta[k] + j2.eta[k] + j3.eta[k]).is_zero());
        }
    }
}

TEST_CASE("affine bracket agrees with the ambient bracket to first order") {
    std::mt19937 rng(53);
    AffineLine a;
    Rank1Gamma r;
    NilAff n;
    So3 s;
    for (const auto* pi : {&a.pi, &r.pi, &n.pi, &s.pi}) {
        auto ctx = pi->context();
        for (int t = 0; t < 10; ++t)
            CHECK(first_order_check(*pi, ctx, random_affine(ctx, rng), random_affine(ctx, rng)));
    }
}

TEST_CASE("affine element / polynomial conversion") {
    auto ctx = make_context({"x1"}, {"y1", "y2"});
    Poly p = P(ctx, "x1^2 + 3*x1*y1 - y2");
    AffineElement u = poly_to_affine(ctx, p);
    CHECK(u.f == P(ctx, "x1^2"));
    CHECK(u.eta[0] == P(ctx, "3*x1"));
    CHECK(u.eta[1] == P(ctx, "-1"));
    CHECK(affine_to_poly(ctx, u) == p);
    CHECK_THROWS_AS(poly_to_affine(ctx, P(ctx, "y1^2")), InfinitesimalError);
}
