#pragma once

#include "agg/core.hpp"

#include <json.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace agg {

/// Summary of one grid compilation run.
struct CompileReport {
    int arity = 0;
    int k = 0;
    std::uint64_t node_count = 0; // logical (unshared) tree size
    std::uint64_t h_blocks = 0;   // (k+1)^n - 2
    double wall_ms = 0.0;

    nlohmann::json to_json() const;
    static CompileReport from_json(const nlohmann::json& doc);
};

/// The n-ary expression that is constant b away from the two corners:
/// evaluates to 0 at all-zeros, 1 at all-ones, b elsewhere.
ExprPtr build_G(int n, Param b);

/// Building block pinned at a: evaluates to 1 at all-ones, f(a) on the
/// up-set of a (top corner excluded), 0 where x is not above a.
/// Requires a strictly between the corners (nonempty support).
ExprPtr build_h(const AggFunction& f, const InputVector& a);
ExprPtr build_h(const AggFunction& f, std::span<const GridPoint> a);

/// Step-wise lower approximation: join of h-blocks over all grid points of
/// I_k^n except the two corners, children in lexicographic grid order.
/// Equals f exactly on the grid, is <= f everywhere, and hits 0/1 at the
/// corners. f must satisfy the boundary conditions.
std::pair<ExprPtr, CompileReport> compile_grid(const AggFunction& f, int k);

/// Independent reference for compile_grid: directly computes
/// max{ f(a) : a grid point, not a corner, a <= x }, with 1 at the top
/// corner and 0 on an empty candidate set.
UnitValue grid_oracle(const AggFunction& f, int k, const InputVector& x);

/// Meet of chi_q over all reduced rationals q <= a with denominator <= m.
/// Pointwise equal to chi_{q*} for the largest such rational q*; converges
/// to chi_a from above as m grows.
ExprPtr refine_chi(UnitValue a, int max_denominator);

/// Join of Med_q over all reduced rationals q <= b with denominator <= m.
/// Pointwise within (b - q*) <= 1/m of Med_b, from below.
ExprPtr refine_med(UnitValue b, int max_denominator);

/// Unary piecewise-constant aggregation function with explicit breakpoints.
/// f(0) = 0 and f(1) = 1 always. Between consecutive breakpoints the
/// function is constant; at a breakpoint it takes the left or the right
/// piece's value according to the attainment flag (right = the value list's
/// convention of closed-left pieces).
class StepFn1D {
public:
    enum class Attain { left, right };

    StepFn1D(std::vector<double> breakpoints, std::vector<double> values,
             std::vector<Attain> attainment);

    /// All breakpoints attained from the right (closed-left pieces).
    static StepFn1D right_attained(std::vector<double> breakpoints,
                                   std::vector<double> values);

    double operator()(double x) const;
    const std::vector<double>& breakpoints() const noexcept { return breaks_; }
    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<Attain>& attainment() const noexcept { return attain_; }

    AggFunction as_agg(std::string name) const;

private:
    std::vector<double> breaks_;
    std::vector<double> values_;
    std::vector<Attain> attain_;
};

/// The jump set D(f): breakpoints c in ]0,1[ where the left supremum is
/// strictly below f(c). Computed exactly from the representation.
std::vector<UnitValue> jump_set(const StepFn1D& f);

/// Finite join of unary h-blocks over the reduced rationals in ]0,1[ with
/// denominator <= m plus the jump set of f. Exact for step functions whose
/// pieces' values are witnessed at an included point (in particular for
/// right-attained staircases starting at 0); otherwise a lower
/// approximation with gaps only on intervals free of included points.
ExprPtr compile_unary_exact(const StepFn1D& f, int max_denominator);

/// f^d(x) = 1 - f(1-x componentwise); provenance dual_of.
AggFunction dualize(const AggFunction& f);

/// Structural dual: evaluate(dualize_expr(e), x) = 1 - evaluate(e, 1-x)
/// for all x (up to rounding of the 1-x arithmetic). Involution at the
/// evaluation level.
ExprPtr dualize_expr(const ExprPtr& e);

} // namespace agg
