#include "agg/compiler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace agg {

namespace {

constexpr int kMaxDenominator = 100000;

// Exact test p/d <= a for a finite double a in [0,1], p,d small integers.
// a is decomposed as M / 2^s with M a 53-bit integer, then cross-multiplied
// in 128-bit arithmetic.
bool rational_leq(std::int64_t p, std::int64_t d, double a) {
    if (p == 0) return true;
    if (a == 0.0) return false;
    if (a == 1.0) return p <= d;
    int e = 0;
    double frac = std::frexp(a, &e); // a = frac * 2^e, frac in [0.5, 1)
    auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
    int s = 53 - e; // a = mant / 2^s, s >= 53 for a < 1
    if (s > 100) return false; // a < 2^-47 < 1/d for any supported d
    __int128 lhs = static_cast<__int128>(p) << s;
    __int128 rhs = static_cast<__int128>(mant) * d;
    return lhs <= rhs;
}

// Reduced rationals p/d with d <= m, restricted to q <= bound, ascending.
std::vector<GridPoint> rationals_upto(int m, double bound, bool interior_only) {
    std::vector<GridPoint> out;
    for (std::int64_t d = 1; d <= m; ++d) {
        for (std::int64_t p = 0; p <= d; ++p) {
            if (std::gcd(p, d) != 1) continue;
            if (interior_only && (p == 0 || p == d)) continue;
            if (!rational_leq(p, d, bound)) continue;
            out.emplace_back(p, d);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void check_denominator(int m) {
    if (m < 1) throw std::invalid_argument("max_denominator must be >= 1");
    if (m > kMaxDenominator)
        throw std::invalid_argument("max_denominator too large");
}

// G^2_b(u, v) = Med_b(chi_0(u v v), chi_1(u ^ v)). The 0/1 thresholds are
// plain floats so the canonical text reads chi(0, ...) / chi(1, ...).
ExprPtr g2_of(const Param& b, ExprPtr u, ExprPtr v) {
    auto lo = BasisExpr::chi(Param(0.0), BasisExpr::join({u, v}));
    auto hi = BasisExpr::chi(Param(1.0), BasisExpr::meet({std::move(u), std::move(v)}));
    return BasisExpr::med(b, std::move(lo), std::move(hi));
}

std::uint64_t checked_pow(std::uint64_t base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > (std::uint64_t(1) << 24))
            throw std::invalid_argument("grid too large: (k+1)^n exceeds supported size");
        r *= base;
    }
    return r;
}

void check_boundary(const AggFunction& f) {
    int n = f.arity();
    if (f(InputVector::zeros(n).coords()) != 0.0)
        throw std::invalid_argument("function fails boundary condition f(0,...,0) = 0");
    if (f(InputVector::ones(n).coords()) != 1.0)
        throw std::invalid_argument("function fails boundary condition f(1,...,1) = 1");
}

} // namespace

// --- CompileReport -----------------------------------------------------------

nlohmann::json CompileReport::to_json() const {
    return {{"arity", arity},
            {"k", k},
            {"node_count", node_count},
            {"h_blocks", h_blocks},
            {"wall_ms", wall_ms}};
}

CompileReport CompileReport::from_json(const nlohmann::json& doc) {
    CompileReport r;
    r.arity = doc.at("arity").get<int>();
    r.k = doc.at("k").get<int>();
    r.node_count = doc.at("node_count").get<std::uint64_t>();
    r.h_blocks = doc.at("h_blocks").get<std::uint64_t>();
    r.wall_ms = doc.value("wall_ms", 0.0);
    return r;
}

// --- G and h -----------------------------------------------------------------

ExprPtr build_G(int n, Param b) {
    if (n < 1) throw std::invalid_argument("build_G: arity must be >= 1");
    if (n == 1) {
        auto x0 = BasisExpr::proj(0, 1);
        return BasisExpr::med(b, BasisExpr::chi(Param(0.0), x0),
                              BasisExpr::chi(Param(1.0), x0));
    }
    ExprPtr cur = g2_of(b, BasisExpr::proj(0, n), BasisExpr::proj(1, n));
    for (int i = 2; i < n; ++i) cur = g2_of(b, cur, BasisExpr::proj(i, n));
    return cur;
}

namespace {

ExprPtr build_h_impl(const AggFunction& f, const InputVector& av,
                     const std::vector<Param>& params) {
    if (f.arity() != av.size())
        throw std::invalid_argument("build_h: arity mismatch between f and a");
    if (!av.is_star())
        throw std::invalid_argument(
            "build_h: a must lie strictly between the corners (nonempty support)");
    double fa = f(av.coords());
    std::vector<ExprPtr> kids;
    kids.push_back(build_G(av.size(), Param(UnitValue(fa))));
    for (int i : av.support())
        kids.push_back(BasisExpr::chi(params[static_cast<std::size_t>(i)],
                                      BasisExpr::proj(i, av.size())));
    return BasisExpr::meet(std::move(kids));
}

} // namespace

ExprPtr build_h(const AggFunction& f, const InputVector& a) {
    std::vector<Param> params;
    params.reserve(static_cast<std::size_t>(a.size()));
    for (int i = 0; i < a.size(); ++i) params.emplace_back(a[i]);
    return build_h_impl(f, a, params);
}

ExprPtr build_h(const AggFunction& f, std::span<const GridPoint> a) {
    std::vector<double> coords;
    std::vector<Param> params;
    coords.reserve(a.size());
    params.reserve(a.size());
    for (const GridPoint& g : a) {
        coords.push_back(g.to_double());
        params.emplace_back(g);
    }
    return build_h_impl(f, InputVector(std::move(coords)), params);
}

// --- grid compilation ----------------------------------------------------------

std::pair<ExprPtr, CompileReport> compile_grid(const AggFunction& f, int k) {
    auto t0 = std::chrono::steady_clock::now();
    if (k < 1) throw std::invalid_argument("compile_grid: k must be >= 1");
    int n = f.arity();
    check_boundary(f);
    std::uint64_t cells = checked_pow(static_cast<std::uint64_t>(k) + 1, n);

    std::vector<ExprPtr> blocks;
    blocks.reserve(cells - 2);
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    std::vector<GridPoint> a;
    for (;;) {
        bool zeros = true, ones = true;
        for (int v : idx) {
            zeros = zeros && v == 0;
            ones = ones && v == k;
        }
        if (!zeros && !ones) {
            a.clear();
            for (int v : idx) a.emplace_back(v, k);
            blocks.push_back(build_h(f, a));
        }
        int d = n - 1;
        while (d >= 0 && idx[static_cast<std::size_t>(d)] == k) {
            idx[static_cast<std::size_t>(d)] = 0;
            --d;
        }
        if (d < 0) break;
        ++idx[static_cast<std::size_t>(d)];
    }
    ExprPtr root = BasisExpr::join(std::move(blocks));

    CompileReport report;
    report.arity = n;
    report.k = k;
    report.h_blocks = cells - 2;
    report.node_count = root->node_count();
    report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    return {std::move(root), report};
}

UnitValue grid_oracle(const AggFunction& f, int k, const InputVector& x) {
    if (k < 1) throw std::invalid_argument("grid_oracle: k must be >= 1");
    int n = f.arity();
    if (x.size() != n) throw std::invalid_argument("grid_oracle: arity mismatch");
    check_boundary(f);
    if (x.all_ones()) return UnitValue(1.0);

    std::vector<double> coord(static_cast<std::size_t>(k) + 1);
    for (int v = 0; v <= k; ++v)
        coord[static_cast<std::size_t>(v)] = GridPoint(v, k).to_double();

    // candidates a <= x form the prefix box [0..m_i] per axis
    std::vector<int> m(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        int v = 0;
        while (v < k && coord[static_cast<std::size_t>(v) + 1] <= x[i]) ++v;
        m[static_cast<std::size_t>(i)] = v;
    }

    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> a(static_cast<std::size_t>(n), 0.0);
    double best = 0.0;
    for (;;) {
        bool zeros = true, ones = true;
        for (int i = 0; i < n; ++i) {
            int v = idx[static_cast<std::size_t>(i)];
            zeros = zeros && v == 0;
            ones = ones && v == k;
            a[static_cast<std::size_t>(i)] = coord[static_cast<std::size_t>(v)];
        }
        if (!zeros && !ones) best = std::max(best, f(a));
        int d = n - 1;
        while (d >= 0 && idx[static_cast<std::size_t>(d)] == m[static_cast<std::size_t>(d)]) {
            idx[static_cast<std::size_t>(d)] = 0;
            --d;
        }
        if (d < 0) break;
        ++idx[static_cast<std::size_t>(d)];
    }
    return UnitValue(best);
}

// --- rational refinements -------------------------------------------------------

ExprPtr refine_chi(UnitValue a, int max_denominator) {
    check_denominator(max_denominator);
    auto qs = rationals_upto(max_denominator, a.value(), false);
    auto x0 = BasisExpr::proj(0, 1);
    std::vector<ExprPtr> kids;
    kids.reserve(qs.size());
    for (const GridPoint& q : qs) kids.push_back(BasisExpr::chi(Param(q), x0));
    return BasisExpr::meet(std::move(kids));
}

ExprPtr refine_med(UnitValue b, int max_denominator) {
    check_denominator(max_denominator);
    auto qs = rationals_upto(max_denominator, b.value(), false);
    auto x0 = BasisExpr::proj(0, 2);
    auto x1 = BasisExpr::proj(1, 2);
    std::vector<ExprPtr> kids;
    kids.reserve(qs.size());
    for (const GridPoint& q : qs) kids.push_back(BasisExpr::med(Param(q), x0, x1));
    return BasisExpr::join(std::move(kids));
}

// --- step functions ---------------------------------------------------------------

StepFn1D::StepFn1D(std::vector<double> breakpoints, std::vector<double> values,
                   std::vector<Attain> attainment)
    : breaks_(std::move(breakpoints)), values_(std::move(values)),
      attain_(std::move(attainment)) {
    if (values_.size() != breaks_.size() + 1)
        throw std::invalid_argument("StepFn1D: need one value per piece (breakpoints + 1)");
    if (attain_.size() != breaks_.size())
        throw std::invalid_argument("StepFn1D: need one attainment flag per breakpoint");
    for (double c : breaks_)
        if (!(c > 0.0 && c < 1.0))
            throw std::invalid_argument("StepFn1D: breakpoints must lie strictly inside ]0,1[");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        if (!(breaks_[i - 1] < breaks_[i]))
            throw std::invalid_argument("StepFn1D: breakpoints must be strictly increasing");
    for (double v : values_)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("StepFn1D: values must lie in [0,1]");
    for (std::size_t i = 1; i < values_.size(); ++i)
        if (values_[i - 1] > values_[i])
            throw std::invalid_argument("StepFn1D: values must be nondecreasing");
}

StepFn1D StepFn1D::right_attained(std::vector<double> breakpoints,
                                  std::vector<double> values) {
    std::vector<Attain> flags(breakpoints.size(), Attain::right);
    return StepFn1D(std::move(breakpoints), std::move(values), std::move(flags));
}

double StepFn1D::operator()(double x) const {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("StepFn1D: argument outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x);
    auto j = static_cast<std::size_t>(it - breaks_.begin()); // count of c < x (or first ==)
    if (it != breaks_.end() && *it == x)
        return attain_[j] == Attain::right ? values_[j + 1] : values_[j];
    return values_[j];
}

AggFunction StepFn1D::as_agg(std::string name) const {
    StepFn1D copy = *this;
    return AggFunction(std::move(name), 1,
                       [copy = std::move(copy)](std::span<const double> x) {
                           return copy(x[0]);
                       },
                       Provenance::catalog);
}

std::vector<UnitValue> jump_set(const StepFn1D& f) {
    std::vector<UnitValue> out;
    const auto& c = f.breakpoints();
    const auto& v = f.values();
    const auto& fl = f.attainment();
    for (std::size_t j = 0; j < c.size(); ++j) {
        // left sup at c_j is the previous piece's value v_j
        double at = fl[j] == StepFn1D::Attain::right ? v[j + 1] : v[j];
        if (v[j] < at) out.emplace_back(c[j]);
    }
    return out;
}

ExprPtr compile_unary_exact(const StepFn1D& f, int max_denominator) {
    check_denominator(max_denominator);
    auto thresholds = rationals_upto(max_denominator, 1.0, true); // interior rationals
    std::vector<Param> params;
    params.reserve(thresholds.size());
    std::vector<double> seen;
    for (const GridPoint& q : thresholds) {
        params.emplace_back(q);
        seen.push_back(q.to_double());
    }
    for (UnitValue c : jump_set(f)) {
        if (std::find(seen.begin(), seen.end(), c.value()) == seen.end()) {
            params.emplace_back(c);
            seen.push_back(c.value());
        }
    }
    std::sort(params.begin(), params.end(),
              [](const Param& a, const Param& b) { return a.value() < b.value(); });

    auto x0 = BasisExpr::proj(0, 1);
    std::vector<ExprPtr> blocks;
    blocks.reserve(params.size());
    for (const Param& p : params) {
        auto g = build_G(1, Param(UnitValue(f(p.value()))));
        blocks.push_back(BasisExpr::meet({std::move(g), BasisExpr::chi(p, x0)}));
    }
    return BasisExpr::join(std::move(blocks));
}

// --- duality -----------------------------------------------------------------------

AggFunction dualize(const AggFunction& f) {
    int n = f.arity();
    return AggFunction("dual(" + f.name() + ")", n,
                       [f](std::span<const double> x) {
                           std::vector<double> r(x.size());
                           for (std::size_t i = 0; i < x.size(); ++i) r[i] = 1.0 - x[i];
                           return 1.0 - f(r);
                       },
                       Provenance::dual_of);
}

namespace {

Param dual_med_param(const Param& b) {
    if (b.is_rational()) {
        const GridPoint& r = b.rational();
        return Param(GridPoint(r.den() - r.num(), r.den()));
    }
    return Param(1.0 - b.value());
}

// 1 - chi_a(1-u) is the indicator of "u > 1-a or u = 1": 1_{{1}} for a = 0
// and 1_{]1-a,1]} otherwise. The half-open interval is realized as a chi
// whose threshold is the smallest double above 1-a, which coincides with
// the strict comparison u > 1-a on doubles.
Param dual_chi_param(const Param& a) {
    double av = a.value();
    if (av == 0.0) return a.is_rational() ? Param(GridPoint(1, 1)) : Param(1.0);
    if (av == 1.0) return a.is_rational() ? Param(GridPoint(0, 1)) : Param(0.0);
    double c = 1.0 - av;
    if (c >= 1.0) return Param(1.0);
    return Param(std::nextafter(c, 2.0));
}

} // namespace

ExprPtr dualize_expr(const ExprPtr& e) {
    if (!e) throw std::invalid_argument("dualize_expr: null expression");
    std::unordered_map<const BasisExpr*, ExprPtr> memo;
    auto walk = [&](auto&& self, const ExprPtr& node) -> ExprPtr {
        auto it = memo.find(node.get());
        if (it != memo.end()) return it->second;
        ExprPtr out;
        switch (node->kind()) {
        case NodeKind::proj:
            out = node;
            break;
        case NodeKind::chi:
            out = BasisExpr::chi(dual_chi_param(node->param()),
                                 self(self, node->children()[0]));
            break;
        case NodeKind::med:
            out = BasisExpr::med(dual_med_param(node->param()),
                                 self(self, node->children()[0]),
                                 self(self, node->children()[1]));
            break;
        case NodeKind::join:
        case NodeKind::meet: {
            std::vector<ExprPtr> cs;
            cs.reserve(node->children().size());
            for (const auto& c : node->children()) cs.push_back(self(self, c));
            out = node->kind() == NodeKind::join ? BasisExpr::meet(std::move(cs))
                                                 : BasisExpr::join(std::move(cs));
            break;
        }
        }
        memo.emplace(node.get(), out);
        return out;
    };
    return walk(walk, e);
}

} // namespace agg
