#include "agg/dsl.hpp"

#include "agg/compiler.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace agg;
using dsl::ParseError;

TEST_CASE("parse builds the constant-block tree from the worked text") {
    auto e = dsl::parse("med(1/2, chi(0, join(x0, x1)), chi(1, meet(x0, x1)))");
    CHECK(structurally_equal(e, build_G(2, Param(GridPoint(1, 2)))));
    CHECK(e->arity() == 2);
    CHECK(evaluate(*e, InputVector{0.3, 0.9}.coords()) == 0.5);
}

TEST_CASE("parse handles projections and whitespace") {
    auto e = dsl::parse("x0");
    CHECK(e->kind() == NodeKind::proj);
    CHECK(e->proj_index() == 0);
    CHECK(e->arity() == 1);
    CHECK(structurally_equal(dsl::parse("  join ( x0 ,\n x1 )  "), dsl::parse("join(x0,x1)")));
}

TEST_CASE("parse rejects out-of-range and malformed numbers") {
    CHECK_THROWS_AS(dsl::parse("chi(2/1, x0)"), ParseError);
    CHECK_THROWS_AS(dsl::parse("chi(1.5, x0)"), ParseError);
    CHECK_THROWS_AS(dsl::parse("chi(1/0, x0)"), ParseError);
    try {
        dsl::parse("chi(2/1, x0)");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.col() == 5);
    }
}

TEST_CASE("parse reports positioned syntax errors") {
    try {
        dsl::parse("join(x0,\n  med(1/2, x1))");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.col() > 1);
    }
    CHECK_THROWS_AS(dsl::parse(""), ParseError);
    CHECK_THROWS_AS(dsl::parse("join()"), ParseError);
    CHECK_THROWS_AS(dsl::parse("frob(x0)"), ParseError);
    CHECK_THROWS_AS(dsl::parse("x"), ParseError);
    CHECK_THROWS_AS(dsl::parse("med(1/2, x0)"), ParseError);
    CHECK_THROWS_AS(dsl::parse("x0 x1"), ParseError);
    CHECK_THROWS_AS(dsl::parse("chi(0.5 x0)"), ParseError);
}

TEST_CASE("expected arity validates and widens projections") {
    auto e = dsl::parse("x0", 3);
    CHECK(e->arity() == 3);
    CHECK_THROWS_AS(dsl::parse("x2", 2), ParseError);
    CHECK_THROWS_AS(dsl::parse("x0", 0), ParseError);
}

TEST_CASE("print produces the canonical form") {
    CHECK(dsl::print(BasisExpr::proj(0, 1)) == "x0");
    CHECK(dsl::print(dsl::parse("join(x0,x1)")) == "join(x0, x1)");
    CHECK(dsl::print(dsl::parse("med( 1/2,chi(0,x0), x1 )")) == "med(1/2, chi(0, x0), x1)");
    CHECK(dsl::print(BasisExpr::chi(Param(0.25), BasisExpr::proj(0, 1))) == "chi(0.25, x0)");
    CHECK(dsl::print(BasisExpr::chi(Param(GridPoint(1, 3)), BasisExpr::proj(0, 1))) ==
          "chi(1/3, x0)");
}

TEST_CASE("parse after print is the identity on random trees") {
    Rng rng(21);
    for (int t = 0; t < 1000; ++t) {
        int n = 1 + rng.below(3);
        auto e = aggtest::random_expr_full(rng, n, 4);
        auto back = dsl::parse(dsl::print(*e));
        CHECK(structurally_equal(*e, *back));
    }
    // trees with unused trailing variables round-trip with an explicit arity
    for (int t = 0; t < 200; ++t) {
        int n = 2 + rng.below(2);
        auto e = aggtest::random_expr(rng, n, 3);
        auto back = dsl::parse(dsl::print(*e), n);
        CHECK(structurally_equal(*e, *back));
    }
}

TEST_CASE("printing is idempotent") {
    Rng rng(22);
    for (int t = 0; t < 200; ++t) {
        auto e = aggtest::random_expr_full(rng, 1 + rng.below(3), 4);
        auto once = dsl::print(*e);
        CHECK(dsl::print(*dsl::parse(once)) == once);
    }
}

TEST_CASE("round-trip preserves the compiled product expression") {
    auto f = AggFunction("product", 2,
                         [](std::span<const double> x) { return x[0] * x[1]; },
                         Provenance::catalog);
    auto [expr, report] = compile_grid(f, 5);
    auto back = dsl::parse(dsl::print(*expr));
    CHECK(structurally_equal(*expr, *back));
    auto jback = dsl::from_json(dsl::to_json(*expr));
    CHECK(structurally_equal(*expr, *jback));
}

TEST_CASE("JSON schema anchors") {
    CHECK(dsl::to_json(BasisExpr::proj(0, 2)) == nlohmann::json::parse(R"({"proj":{"i":0,"n":2}})"));
    auto chi13 = BasisExpr::chi(Param(GridPoint(1, 3)), BasisExpr::proj(0, 1));
    auto doc = dsl::to_json(*chi13);
    CHECK(doc.at("chi").at("a") == nlohmann::json::parse(R"({"num":1,"den":3})"));
    CHECK(dsl::to_json(BasisExpr::chi(Param(0.5), BasisExpr::proj(0, 1))).at("chi").at("a") == 0.5);
}

TEST_CASE("JSON round-trip is the identity on random trees") {
    Rng rng(23);
    for (int t = 0; t < 1000; ++t) {
        int n = 1 + rng.below(3);
        auto e = aggtest::random_expr(rng, n, 4);
        CHECK(structurally_equal(*e, *dsl::from_json(dsl::to_json(*e))));
    }
}

TEST_CASE("from_json rejects malformed documents") {
    CHECK_THROWS_AS(dsl::from_json(nlohmann::json::parse(R"({"frob":1})")), std::invalid_argument);
    CHECK_THROWS_AS(dsl::from_json(nlohmann::json::parse(R"({"join":[]})")), std::invalid_argument);
    CHECK_THROWS_AS(dsl::from_json(nlohmann::json::parse(R"({"proj":{"i":0}})")), std::invalid_argument);
    CHECK_THROWS_AS(dsl::from_json(nlohmann::json::parse(R"({"chi":{"a":2.0,"child":{"proj":{"i":0,"n":1}}}})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(dsl::from_json(nlohmann::json::parse("[1,2]")), std::invalid_argument);
}
