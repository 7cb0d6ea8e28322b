#include "agg/core.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

using namespace agg;

TEST_CASE("UnitValue enforces the unit interval") {
    CHECK(UnitValue(0.0).value() == 0.0);
    CHECK(UnitValue(1.0).value() == 1.0);
    CHECK(UnitValue(0.5).value() == 0.5);
    CHECK_THROWS_AS(UnitValue(-0.001), std::invalid_argument);
    CHECK_THROWS_AS(UnitValue(1.001), std::invalid_argument);
    CHECK_THROWS_AS(UnitValue(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
}

TEST_CASE("GridPoint is exact and normalized") {
    CHECK(GridPoint(2, 4) == GridPoint(1, 2));
    CHECK(GridPoint(2, 4).num() == 1);
    CHECK(GridPoint(2, 4).den() == 2);
    CHECK(GridPoint(1, 3) < GridPoint(2, 5));
    CHECK(GridPoint(0, 7) == GridPoint(0, 1));
    CHECK(GridPoint(3, 3) == GridPoint(1, 1));
    CHECK(GridPoint(1, 2).to_double() == 0.5);
    CHECK(GridPoint(1, 3).to_double() == 1.0 / 3.0);
    CHECK_THROWS_AS(GridPoint(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(GridPoint(-1, 2), std::invalid_argument);
    CHECK_THROWS_AS(GridPoint(3, 2), std::invalid_argument);
}

TEST_CASE("InputVector order, star membership and support") {
    InputVector a{0.2, 0.0, 0.7};
    InputVector b{0.3, 0.0, 0.7};
    CHECK(a.leq(b));
    CHECK_FALSE(b.leq(a));
    CHECK(a.support() == std::vector<int>{0, 2});
    CHECK(a.is_star());
    CHECK_FALSE(InputVector::zeros(3).is_star());
    CHECK_FALSE(InputVector::ones(3).is_star());
    CHECK(InputVector::zeros(2).support().empty());
    CHECK(InputVector({0.0, 1.0}).is_star());
    CHECK_THROWS_AS(InputVector({0.5, 1.5}), std::invalid_argument);
    CHECK_THROWS_AS(InputVector(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("chi matches its three-case definition") {
    CHECK(chi(0.5, 0.5) == 1.0);
    CHECK(chi(0.0, 0.0) == 0.0);
    CHECK(chi(0.0, 0.001) == 1.0);
    CHECK(chi(0.5, 0.499) == 0.0);
    CHECK(chi(1.0, 1.0) == 1.0);
    CHECK(chi(0.7, 0.0) == 0.0);

    Rng rng(11);
    for (int t = 0; t < 1000; ++t) {
        double v = chi(rng.unit(), rng.unit());
        CHECK((v == 0.0 || v == 1.0));
    }
}

TEST_CASE("med_b picks the middle of {x, y, b}") {
    CHECK(med_b(0.0, 0.3, 0.8) == 0.3); // Med_0 = min
    CHECK(med_b(1.0, 0.3, 0.8) == 0.8); // Med_1 = max
    CHECK(med_b(0.5, 0.2, 0.9) == 0.5);
    CHECK(med_b(0.5, 0.6, 0.9) == 0.6);

    // symmetric in all three arguments
    Rng rng(12);
    for (int t = 0; t < 1000; ++t) {
        double a = rng.unit(), b = rng.unit(), c = rng.unit();
        double m = med_b(a, b, c);
        CHECK(m == med_b(a, c, b));
        CHECK(m == med_b(b, a, c));
        CHECK(m == med_b(b, c, a));
        CHECK(m == med_b(c, a, b));
        CHECK(m == med_b(c, b, a));
        // independent route: sort the triple and take the middle
        std::array<double, 3> s{a, b, c};
        std::sort(s.begin(), s.end());
        CHECK(m == s[1]);
    }
}

TEST_CASE("evaluate computes the basis semantics bottom-up") {
    CHECK(evaluate(BasisExpr::proj(1, 3), InputVector{0.2, 0.7, 0.9}).value() == 0.7);

    // the binary constant block at b = 1/2, evaluated off the corners
    auto g2 = BasisExpr::med(
        Param(0.5),
        BasisExpr::chi(Param(0.0), BasisExpr::join({BasisExpr::proj(0, 2), BasisExpr::proj(1, 2)})),
        BasisExpr::chi(Param(1.0), BasisExpr::meet({BasisExpr::proj(0, 2), BasisExpr::proj(1, 2)})));
    CHECK(evaluate(*g2, InputVector{0.3, 0.9}.coords()) == 0.5);

    CHECK(evaluate(BasisExpr::join({BasisExpr::proj(0, 2), BasisExpr::proj(1, 2)}),
                   InputVector{0.0, 0.0})
              .value() == 0.0);

    CHECK_THROWS_AS(evaluate(*g2, InputVector{0.1, 0.2, 0.3}.coords()), std::invalid_argument);
}

TEST_CASE("expression constructors enforce the invariants") {
    CHECK_THROWS_AS(BasisExpr::proj(2, 2), std::invalid_argument);
    CHECK_THROWS_AS(BasisExpr::proj(0, 0), std::invalid_argument);
    CHECK_THROWS_AS(BasisExpr::join({}), std::invalid_argument);
    CHECK_THROWS_AS(BasisExpr::meet({}), std::invalid_argument);
    CHECK_THROWS_AS(BasisExpr::join({BasisExpr::proj(0, 1), BasisExpr::proj(0, 2)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(BasisExpr::med(Param(0.5), BasisExpr::proj(0, 1), BasisExpr::proj(0, 2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(Param(1.5), std::invalid_argument);
}

TEST_CASE("node_count counts the logical tree through sharing") {
    auto x0 = BasisExpr::proj(0, 1);
    CHECK(x0->node_count() == 1);
    auto shared = BasisExpr::med(Param(0.5), x0, x0);
    CHECK(shared->node_count() == 3);
    auto c = BasisExpr::chi(Param(0.25), shared);
    CHECK(c->node_count() == 4);
}

TEST_CASE("evaluation stays in [0,1] and is monotone") {
    Rng rng(13);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 1 + rng.below(3);
        auto e = aggtest::random_expr(rng, n, 4);

        int k = n <= 2 ? 10 : 4;
        auto pts = aggtest::grid(n, k);
        std::vector<double> vals;
        vals.reserve(pts.size());
        for (const auto& p : pts) {
            double v = evaluate(*e, p);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            vals.push_back(v);
        }
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = 0; j < pts.size(); ++j) {
                bool below = true;
                for (std::size_t d = 0; d < pts[i].size(); ++d)
                    below = below && pts[i][d] <= pts[j][d];
                if (below && !(vals[i] <= vals[j])) {
                    CAPTURE(i);
                    CAPTURE(j);
                    CHECK(vals[i] <= vals[j]);
                }
            }
        if (n == 3) {
            for (int t = 0; t < 200; ++t) {
                auto x = aggtest::random_point(rng, n);
                auto y = x;
                for (auto& v : y) v += (1.0 - v) * rng.unit();
                CHECK(evaluate(*e, x) <= evaluate(*e, y));
            }
        }
    }
}

TEST_CASE("compose substitutes projection leaves") {
    auto g = BasisExpr::chi(Param(0.5), BasisExpr::proj(0, 2));

    SUBCASE("identity composition returns the substituted tree") {
        auto r = compose(BasisExpr::proj(0, 1), {g});
        CHECK(r.get() == g.get());
    }

    SUBCASE("max composed with swapped projections") {
        auto mx = BasisExpr::join({BasisExpr::proj(0, 2), BasisExpr::proj(1, 2)});
        auto r = compose(mx, {BasisExpr::proj(1, 2), BasisExpr::proj(0, 2)});
        CHECK(evaluate(*r, InputVector{0.2, 0.8}.coords()) == 0.8);
    }

    SUBCASE("chi threshold applied to a meet") {
        auto f = BasisExpr::chi(Param(0.5), BasisExpr::proj(0, 1));
        auto meet01 = BasisExpr::meet({BasisExpr::proj(0, 2), BasisExpr::proj(1, 2)});
        auto r = compose(f, {meet01});
        CHECK(evaluate(*r, InputVector{0.6, 0.4}.coords()) == 0.0); // min = 0.4 < 0.5
        CHECK(evaluate(*r, InputVector{0.6, 0.7}.coords()) == 1.0);
    }

    SUBCASE("arity mismatches are rejected") {
        auto mx = BasisExpr::join({BasisExpr::proj(0, 2), BasisExpr::proj(1, 2)});
        CHECK_THROWS_AS(compose(mx, {BasisExpr::proj(0, 1)}), std::invalid_argument);
        CHECK_THROWS_AS(compose(mx, {BasisExpr::proj(0, 1), BasisExpr::proj(0, 2)}),
                        std::invalid_argument);
    }

    SUBCASE("composition agrees with evaluate-then-apply") {
        Rng rng(14);
        for (int trial = 0; trial < 30; ++trial) {
            int k = 1 + rng.below(3);
            int n = 1 + rng.below(3);
            auto outer = aggtest::random_expr(rng, k, 3);
            std::vector<ExprPtr> gs;
            for (int i = 0; i < k; ++i) gs.push_back(aggtest::random_expr(rng, n, 3));
            auto comp = compose(outer, gs);
            CHECK(comp->arity() == n);
            for (int t = 0; t < 50; ++t) {
                auto x = aggtest::random_point(rng, n);
                std::vector<double> inner;
                inner.reserve(gs.size());
                for (const auto& gi : gs) inner.push_back(evaluate(*gi, x));
                CHECK(evaluate(*comp, x) == evaluate(*outer, inner));
            }
        }
    }

    SUBCASE("composing with the identity projections changes nothing") {
        Rng rng(15);
        for (int trial = 0; trial < 20; ++trial) {
            int n = 1 + rng.below(3);
            auto e = aggtest::random_expr(rng, n, 3);
            std::vector<ExprPtr> ids;
            for (int i = 0; i < n; ++i) ids.push_back(BasisExpr::proj(i, n));
            auto r = compose(e, ids);
            for (int t = 0; t < 40; ++t) {
                auto x = aggtest::random_point(rng, n);
                CHECK(evaluate(*r, x) == evaluate(*e, x));
            }
        }
    }
}

TEST_CASE("AggFunction wraps evaluators with arity checking") {
    auto prod = AggFunction("product", 2,
                            [](std::span<const double> x) { return x[0] * x[1]; },
                            Provenance::catalog);
    CHECK(prod({0.5, 0.5}) == 0.25);
    CHECK_THROWS_AS(prod({0.5}), std::invalid_argument);
    CHECK(prod.provenance() == Provenance::catalog);

    SUBCASE("from_expr wraps a compiled expression") {
        auto mx = BasisExpr::join({BasisExpr::proj(0, 2), BasisExpr::proj(1, 2)});
        auto f = AggFunction::from_expr("max-expr", mx);
        CHECK(f({0.3, 0.8}) == 0.8);
        CHECK(f.provenance() == Provenance::compiled);
    }

    SUBCASE("from_table builds the staircase of a sampled table") {
        // k = 1 table on {0,1}^2, lexicographic: (0,0),(0,1),(1,0),(1,1)
        auto f = AggFunction::from_table("tab", 2, 1, {0.0, 0.5, 0.5, 1.0});
        CHECK(f({0.0, 0.0}) == 0.0);
        CHECK(f({1.0, 1.0}) == 1.0);
        CHECK(f({0.9, 0.9}) == 0.0); // no usable grid point below
        CHECK(f({1.0, 0.5}) == 0.5); // (1,0) qualifies
        CHECK(f.provenance() == Provenance::sampled);
        CHECK_THROWS_AS(AggFunction::from_table("bad", 2, 1, {0.0, 1.0}),
                        std::invalid_argument);
    }
}
