#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace agg {

/// A scalar in the unit interval [0,1]. Out-of-range or NaN construction throws.
class UnitValue {
public:
    explicit UnitValue(double v);
    double value() const noexcept { return v_; }
    friend bool operator==(UnitValue a, UnitValue b) noexcept { return a.v_ == b.v_; }
    friend auto operator<=>(UnitValue a, UnitValue b) noexcept { return a.v_ <=> b.v_; }

private:
    double v_;
};

/// Exact rational i/k in [0,1], normalized to lowest terms at construction.
/// Comparisons are exact (cross-multiplied integers).
class GridPoint {
public:
    GridPoint(std::int64_t numerator, std::int64_t denominator);
    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    UnitValue to_unit() const { return UnitValue(to_double()); }
    friend bool operator==(const GridPoint& a, const GridPoint& b) noexcept {
        return a.num_ * b.den_ == b.num_ * a.den_;
    }
    friend auto operator<=>(const GridPoint& a, const GridPoint& b) noexcept {
        return a.num_ * b.den_ <=> b.num_ * a.den_;
    }

private:
    std::int64_t num_;
    std::int64_t den_;
};

/// Threshold parameter for chi / med nodes: a float, or an exact rational
/// whose form is preserved through printing and serialization.
class Param {
public:
    Param(double v) : val_(UnitValue(v).value()) {}
    Param(UnitValue v) : val_(v.value()) {}
    Param(GridPoint p) : rat_(p), val_(p.to_double()) {}
    double value() const noexcept { return val_; }
    bool is_rational() const noexcept { return rat_.has_value(); }
    const GridPoint& rational() const { return *rat_; }
    /// Tag-sensitive: a rational and a float never compare equal, so that
    /// structural round-trips preserve the stored form.
    bool operator==(const Param& o) const noexcept {
        if (rat_.has_value() != o.rat_.has_value()) return false;
        if (rat_) return *rat_ == *o.rat_;
        return val_ == o.val_;
    }

private:
    std::optional<GridPoint> rat_;
    double val_;
};

/// A point of [0,1]^n with the componentwise partial order.
class InputVector {
public:
    explicit InputVector(std::vector<double> coords);
    InputVector(std::initializer_list<double> coords)
        : InputVector(std::vector<double>(coords)) {}
    static InputVector zeros(int n) { return InputVector(std::vector<double>(n, 0.0)); }
    static InputVector ones(int n) { return InputVector(std::vector<double>(n, 1.0)); }

    int size() const noexcept { return static_cast<int>(coords_.size()); }
    double operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }
    std::span<const double> coords() const noexcept { return coords_; }

    bool leq(const InputVector& other) const;
    bool all_zeros() const;
    bool all_ones() const;
    /// Membership in [0,1]^n_*: neither all-zeros nor all-ones.
    bool is_star() const { return !all_zeros() && !all_ones(); }
    /// Support J_a: indices of nonzero coordinates.
    std::vector<int> support() const;

private:
    std::vector<double> coords_;
};

// --- primitive basis functions ------------------------------------------

/// chi_a: indicator of [a,1] for a > 0, of ]0,1] for a = 0.
/// 1 if x >= a and x != 0; 0 if x < a or x = 0. Comparison is exact.
inline double chi(double a, double x) noexcept {
    return (x >= a && x != 0.0) ? 1.0 : 0.0;
}
inline UnitValue chi(UnitValue a, UnitValue x) {
    return UnitValue(chi(a.value(), x.value()));
}

/// b-median: the middle element of {x, y, b}. Med_0 = min, Med_1 = max.
inline double med_b(double b, double x, double y) noexcept {
    double lo = x < y ? x : y;
    double hi = x < y ? y : x;
    double m = hi < b ? hi : b;
    return lo > m ? lo : m;
}
inline UnitValue med_b(UnitValue b, UnitValue x, UnitValue y) {
    return UnitValue(med_b(b.value(), x.value(), y.value()));
}

// --- expression tree ------------------------------------------------------

class BasisExpr;
using ExprPtr = std::shared_ptr<const BasisExpr>;

enum class NodeKind { proj, chi, med, join, meet };

/// Immutable expression tree over the generating basis
/// {projections, chi_a, Med_b, finite join, finite meet}.
/// All leaves are projections of one common arity; every node records it.
class BasisExpr {
public:
    static ExprPtr proj(int index, int arity);
    static ExprPtr chi(Param a, ExprPtr child);
    static ExprPtr med(Param b, ExprPtr left, ExprPtr right);
    static ExprPtr join(std::vector<ExprPtr> children);
    static ExprPtr meet(std::vector<ExprPtr> children);

    NodeKind kind() const noexcept { return kind_; }
    int arity() const noexcept { return arity_; }
    int proj_index() const noexcept { return index_; }
    const Param& param() const { return *param_; }
    const std::vector<ExprPtr>& children() const noexcept { return children_; }

    /// Size of the logical (unshared) tree; shared subtrees count each time
    /// they occur. Saturates instead of overflowing.
    std::uint64_t node_count() const noexcept { return size_; }

private:
    friend double eval_node(const BasisExpr& e, std::span<const double> x,
                            double (*chi_impl)(double, double));

    BasisExpr(NodeKind k, int index, int arity, std::optional<Param> p,
              std::vector<ExprPtr> children);

    NodeKind kind_;
    int index_;
    int arity_;
    std::optional<Param> param_;
    std::vector<ExprPtr> children_;
    std::uint64_t size_ = 1;
    // meets evaluate cheap children first so a 0 stops the scan early;
    // value-neutral because min is commutative
    std::vector<std::uint32_t> eval_order_;
};

bool structurally_equal(const BasisExpr& a, const BasisExpr& b);
inline bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    return structurally_equal(*a, *b);
}

/// Bottom-up evaluation. proj -> x_i, chi -> chi(a,.), med -> med_b(b,.,.),
/// join -> max of children, meet -> min of children.
double evaluate(const BasisExpr& e, std::span<const double> x);
UnitValue evaluate(const BasisExpr& e, const InputVector& x);
inline double evaluate(const ExprPtr& e, std::span<const double> x) { return evaluate(*e, x); }
inline UnitValue evaluate(const ExprPtr& e, const InputVector& x) { return evaluate(*e, x); }

/// Verification hook: evaluate with a replacement for the scalar chi
/// primitive. Used by the mutation-sensitivity checks.
using ChiImpl = double (*)(double a, double x);
double evaluate_with_chi(const BasisExpr& e, std::span<const double> x, ChiImpl chi_impl);

/// Structural substitution of each proj(i) leaf of f by gs[i].
/// evaluate(compose(f,gs), x) == evaluate(f, (evaluate(g_0,x),...)).
ExprPtr compose(const ExprPtr& f, const std::vector<ExprPtr>& gs);

// --- abstract aggregation function ---------------------------------------

enum class Provenance { catalog, sampled, compiled, dual_of, g_phi };

/// An n-ary aggregation function with a uniform evaluation interface.
/// Boundary and monotonicity are checked by the verify module, not assumed.
class AggFunction {
public:
    using Evaluator = std::function<double(std::span<const double>)>;

    AggFunction(std::string name, int arity, Evaluator eval, Provenance prov);

    /// Wraps a compiled expression; provenance `compiled`.
    static AggFunction from_expr(std::string name, ExprPtr e);

    /// Staircase function from a table of values on the grid I_k^n, indexed
    /// lexicographically: f(x) = max over grid a <= x (corners excluded) of
    /// table(a), with 0 on the empty set and 1 at the top corner.
    /// Always a valid aggregation function, even for a non-monotone table.
    static AggFunction from_table(std::string name, int arity, int k,
                                  std::vector<double> values);

    double operator()(std::span<const double> x) const;
    double operator()(std::initializer_list<double> x) const {
        return (*this)(std::span<const double>(x.begin(), x.size()));
    }
    UnitValue operator()(const InputVector& x) const { return UnitValue((*this)(x.coords())); }

    int arity() const noexcept { return arity_; }
    const std::string& name() const noexcept { return name_; }
    Provenance provenance() const noexcept { return prov_; }

private:
    std::string name_;
    int arity_;
    Evaluator eval_;
    Provenance prov_;
};

} // namespace agg
