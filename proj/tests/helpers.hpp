#pragma once

#include "agg/core.hpp"
#include "agg/verify.hpp"

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

namespace aggtest {

using agg::Rng;

inline agg::Param random_param(Rng& rng) {
    if (rng.next() % 2 == 0) {
        int den = 1 + rng.below(12);
        int num = rng.below(den + 1);
        return agg::Param(agg::GridPoint(num, den));
    }
    return agg::Param(rng.unit());
}

inline agg::ExprPtr random_expr(Rng& rng, int arity, int depth) {
    if (depth <= 0 || rng.below(5) == 0)
        return agg::BasisExpr::proj(rng.below(arity), arity);
    switch (rng.below(4)) {
    case 0:
        return agg::BasisExpr::chi(random_param(rng), random_expr(rng, arity, depth - 1));
    case 1:
        return agg::BasisExpr::med(random_param(rng), random_expr(rng, arity, depth - 1),
                                   random_expr(rng, arity, depth - 1));
    case 2:
    default: {
        std::vector<agg::ExprPtr> cs;
        int n = 1 + rng.below(3);
        for (int i = 0; i < n; ++i) cs.push_back(random_expr(rng, arity, depth - 1));
        return rng.next() % 2 ? agg::BasisExpr::join(std::move(cs))
                              : agg::BasisExpr::meet(std::move(cs));
    }
    }
}

inline int max_proj_index(const agg::BasisExpr& e) {
    if (e.kind() == agg::NodeKind::proj) return e.proj_index();
    int m = -1;
    for (const auto& c : e.children()) m = std::max(m, max_proj_index(*c));
    return m;
}

/// Random tree whose largest projection index is exactly arity-1, so the
/// parser can infer the arity back from the text.
inline agg::ExprPtr random_expr_full(Rng& rng, int arity, int depth) {
    for (;;) {
        auto e = random_expr(rng, arity, depth);
        if (max_proj_index(*e) == arity - 1) return e;
    }
}

inline std::vector<std::vector<double>> grid(int n, int k) {
    std::vector<std::vector<double>> pts;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (;;) {
        std::vector<double> p;
        for (int v : idx) p.push_back(static_cast<double>(v) / static_cast<double>(k));
        pts.push_back(std::move(p));
        int d = n - 1;
        while (d >= 0 && idx[static_cast<std::size_t>(d)] == k) {
            idx[static_cast<std::size_t>(d)] = 0;
            --d;
        }
        if (d < 0) break;
        ++idx[static_cast<std::size_t>(d)];
    }
    return pts;
}

/// Independent restatement of the grid reduction: max of f over grid points
/// below x with the two corner overrides. Kept separate from the library's
/// grid_oracle on purpose.
inline double brute_grid_max(const agg::AggFunction& f, int k, std::span<const double> x) {
    bool top = true;
    for (double v : x) top = top && v == 1.0;
    if (top) return 1.0;
    double best = 0.0;
    for (const auto& a : grid(static_cast<int>(x.size()), k)) {
        bool zeros = true, ones = true, below = true;
        for (std::size_t i = 0; i < a.size(); ++i) {
            zeros = zeros && a[i] == 0.0;
            ones = ones && a[i] == 1.0;
            below = below && a[i] <= x[i];
        }
        if (zeros || ones || !below) continue;
        best = std::max(best, f(a));
    }
    return best;
}

inline std::vector<double> random_point(Rng& rng, int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& v : x) v = rng.unit();
    return x;
}

} // namespace aggtest
