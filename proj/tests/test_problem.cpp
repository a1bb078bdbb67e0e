#include <catch2/catch_amalgamated.hpp>

#include "ipw/problem.hpp"

using namespace ipw;

namespace {
const char* kAffineLine = R"(# symplectic plane deformed along a line
[manifold]
coordinates = x1, x2, y1

[submanifold]
normal = y1

[poisson]
x1,x2 = 1 + y1

[options]
max_weight = 2
)";
}

TEST_CASE("parse a complete problem file") {
    ProblemFile pf = parse_problem_string(kAffineLine);
    CHECK(pf.coordinates == std::vector<std::string>{"x1", "x2", "y1"});
    CHECK(pf.normal == std::vector<std::string>{"y1"});
    CHECK(pf.max_weight == 2);
    CHECK(pf.has_max_weight);
    REQUIRE(pf.ctx);
    CHECK(pf.ctx->base_count() == 2);
    CHECK(pf.ctx->normal_count() == 1);
    CHECK(to_string(pf.pi.coefficient({0, 1})) == "1 + y1");
    CHECK(pf.pi.coefficient({0, 2}).is_zero());
}

TEST_CASE("unlisted components are zero and order is normalized") {
    ProblemFile pf = parse_problem_string(R"(
[manifold]
coordinates = y1, y2, y3
[submanifold]
normal = y1, y2, y3
[poisson]
y1,y2 = y3
y2,y3 = y1
y1,y3 = -y2
)");
    CHECK(pf.ctx->base_count() == 0);
    // y1,y3 = -y2 stores as the sorted component {0,2} with the same value
    CHECK(to_string(pf.pi.coefficient({0, 2})) == "-y2");
    CHECK(to_string(pf.pi.coefficient({2, 0})) == "y2");
}

TEST_CASE("declaration order drives the triangular rule") {
    // y1 precedes x2 in the declaration, so 'y1,x2' is the accepted spelling
    // even though the internal order puts base coordinates first.
    ProblemFile pf = parse_problem_string(R"(
[manifold]
coordinates = x1, y1, x2
[submanifold]
normal = y1
[poisson]
y1,x2 = x1
)");
    // internal order: x1, x2, y1 -> component (y1, x2) = indices (2, 1)
    CHECK(to_string(pf.pi.coefficient({2, 1})) == "x1");
    CHECK_THROWS_AS(parse_problem_string(R"(
[manifold]
coordinates = x1, y1, x2
[submanifold]
normal = y1
[poisson]
x2,y1 = x1
)"),
                    ProblemError);
}

TEST_CASE("parse errors carry line numbers") {
    auto expect_error = [](const std::string& text, const std::string& fragment) {
        try {
            parse_problem_string(text);
            FAIL("expected ProblemError");
        } catch (const ProblemError& e) {
            CHECK(std::string(e.what()).find(fragment) != std::string::npos);
        }
    };
    expect_error("[manifold]\ncoordinates = x1, x1\n", "duplicate coordinate");
    expect_error("[manifold]\ncoordinates = x1\n[submanifold]\nnormal = y9\n",
                 "not a coordinate");
    expect_error("[wrong]\n", "unknown section");
    expect_error("coordinates = x1\n", "before any section");
    expect_error("[manifold]\ncoordinates = x1, x2\n[poisson]\nx1,x2 = x1 +\n", "x1,x2");
    expect_error("[manifold]\ncoordinates = x1, x2\n[poisson]\nx1,x1 = 1\n", "diagonal");
    expect_error("[manifold]\ncoordinates = x1, x2\n[poisson]\nx1,x2 = 1\nx1,x2 = 2\n",
                 "duplicate component");
    expect_error("[manifold]\ncoordinates = x1\n[options]\nmax_weight = -1\n", ">= 0");
    expect_error("[manifold]\ncoordinates = x1\n[options]\nmax_weight = two\n", "integer");
    expect_error("[manifold]\ncoordinates = x1, x2\n[poisson]\nx1,x2 = z9\n", "unknown variable");

    try {
        parse_problem_string("[manifold]\ncoordinates = x1\n[manifold]\ncoordinates = x1\n");
        FAIL("expected ProblemError");
    } catch (const ProblemError& e) {
        CHECK(e.line == 4);
    }
}

TEST_CASE("parsed structures feed the pipeline") {
    ProblemFile pf = parse_problem_string(kAffineLine);
    CHECK(jacobi_check(pf.pi).holds);
    CHECK(check_poisson_submanifold(pf.pi, pf.ctx).ok);
    auto d = extract(pf.pi, pf.ctx);
    CHECK(to_string(d.kappa[0][1][0]) == "1");
}
