#include "agg/verify.hpp"

#include "agg/catalog.hpp"
#include "agg/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace agg {

namespace {

constexpr double kTol = 1e-12;

std::vector<std::vector<double>> grid_points(int n, int k) {
    std::vector<std::vector<double>> pts;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (;;) {
        std::vector<double> p(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            p[static_cast<std::size_t>(i)] = GridPoint(idx[static_cast<std::size_t>(i)], k).to_double();
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

bool leq(std::span<const double> a, std::span<const double> b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

std::string vec_str(std::span<const double> v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << v[i];
    }
    os << ")";
    return os.str();
}

} // namespace

nlohmann::json Witness::to_json() const {
    return {{"input", input}, {"expected", expected}, {"actual", actual}, {"note", note}};
}

nlohmann::json CheckResult::to_json() const {
    nlohmann::json j{{"name", name}, {"passed", passed}, {"max_error", max_error}};
    if (witness) j["witness"] = witness->to_json();
    return j;
}

bool VerifyReport::all_passed() const {
    return std::all_of(checks_.begin(), checks_.end(),
                       [](const CheckResult& c) { return c.passed; });
}

double VerifyReport::max_error() const {
    double m = 0.0;
    for (const auto& c : checks_) m = std::max(m, c.max_error);
    return m;
}

const CheckResult* VerifyReport::find(const std::string& name) const {
    for (const auto& c : checks_)
        if (c.name == name) return &c;
    return nullptr;
}

nlohmann::json VerifyReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks_) arr.push_back(c.to_json());
    return {{"checks", arr}, {"all_passed", all_passed()}, {"max_error", max_error()}};
}

std::string VerifyReport::to_text() const {
    std::ostringstream os;
    for (const auto& c : checks_) {
        os << (c.passed ? "PASS" : "FAIL") << "  " << c.name
           << "  (max_error=" << c.max_error << ")";
        if (c.witness) {
            os << "\n      witness " << vec_str(c.witness->input)
               << " expected=" << c.witness->expected << " actual=" << c.witness->actual;
            if (!c.witness->note.empty()) os << "  [" << c.witness->note << "]";
        }
        os << "\n";
    }
    os << (all_passed() ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT") << "\n";
    return os.str();
}

// --- aggregation axioms ------------------------------------------------------

VerifyReport check_aggregation(const AggFunction& f, int grid_k, int random_pairs,
                               std::uint64_t seed) {
    if (grid_k < 1) throw std::invalid_argument("check_aggregation: grid_k must be >= 1");
    int n = f.arity();
    VerifyReport report;

    {
        CheckResult c{"boundary-zero"};
        double v = f(InputVector::zeros(n).coords());
        if (v != 0.0) {
            c.passed = false;
            c.max_error = std::abs(v);
            c.witness = Witness{std::vector<double>(static_cast<std::size_t>(n), 0.0), 0.0, v,
                                "f(0,...,0) must be exactly 0"};
        }
        report.add(std::move(c));
    }
    {
        CheckResult c{"boundary-one"};
        double v = f(InputVector::ones(n).coords());
        if (v != 1.0) {
            c.passed = false;
            c.max_error = std::abs(v - 1.0);
            c.witness = Witness{std::vector<double>(static_cast<std::size_t>(n), 1.0), 1.0, v,
                                "f(1,...,1) must be exactly 1"};
        }
        report.add(std::move(c));
    }
    {
        CheckResult c{"monotone-grid"};
        auto pts = grid_points(n, grid_k);
        std::vector<double> vals(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = f(pts[i]);
        for (std::size_t i = 0; i < pts.size() && c.passed; ++i)
            for (std::size_t j = 0; j < pts.size(); ++j) {
                if (!leq(pts[i], pts[j])) continue;
                if (vals[i] > vals[j]) {
                    c.passed = false;
                    c.max_error = vals[i] - vals[j];
                    c.witness = Witness{pts[i], vals[j], vals[i],
                                        "f must be nondecreasing; upper point " + vec_str(pts[j])};
                    break;
                }
            }
        report.add(std::move(c));
    }
    {
        CheckResult c{"monotone-random"};
        Rng rng(seed);
        std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
        for (int t = 0; t < random_pairs && c.passed; ++t) {
            for (int i = 0; i < n; ++i) {
                auto ii = static_cast<std::size_t>(i);
                x[ii] = rng.unit();
                y[ii] = x[ii] + (1.0 - x[ii]) * rng.unit();
            }
            double fx = f(x), fy = f(y);
            if (fx > fy) {
                c.passed = false;
                c.max_error = fx - fy;
                c.witness = Witness{x, fy, fx, "f must be nondecreasing; upper point " + vec_str(y)};
            }
        }
        report.add(std::move(c));
    }
    return report;
}

// --- approximation error ------------------------------------------------------

nlohmann::json ApproxError::to_json() const {
    nlohmann::json j{{"max_gap", max_gap},
                     {"mean_gap", mean_gap},
                     {"lower_bound_ok", lower_bound_ok},
                     {"grid_checked", grid_checked},
                     {"grid_exact", grid_exact}};
    if (lower_violation) j["lower_violation"] = lower_violation->to_json();
    if (grid_witness) j["grid_witness"] = grid_witness->to_json();
    return j;
}

ApproxError approx_error(const AggFunction& f, const BasisExpr& e, int samples,
                         std::uint64_t seed, int grid_k) {
    if (f.arity() != e.arity())
        throw std::invalid_argument("approx_error: arity mismatch");
    if (samples < 1) throw std::invalid_argument("approx_error: samples must be >= 1");
    int n = f.arity();
    ApproxError out;

    Rng rng(seed);
    std::vector<double> x(static_cast<std::size_t>(n));
    double total = 0.0;
    for (int t = 0; t < samples; ++t) {
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = rng.unit();
        double fx = f(x);
        double cx = evaluate(e, x);
        double gap = fx - cx;
        if (cx > fx + kTol && !out.lower_violation) {
            out.lower_bound_ok = false;
            out.lower_violation = Witness{x, fx, cx, "compiled value exceeds the function"};
        }
        out.max_gap = std::max(out.max_gap, gap);
        total += gap;
    }
    out.mean_gap = total / samples;

    if (grid_k >= 1) {
        out.grid_checked = true;
        for (const auto& p : grid_points(n, grid_k)) {
            double fx = f(p);
            double cx = evaluate(e, p);
            if (fx != cx) {
                out.grid_exact = false;
                out.grid_witness = Witness{p, fx, cx, "grid-point exactness"};
                break;
            }
        }
    }
    return out;
}

// --- lemma suite ----------------------------------------------------------------

namespace {

// chi with the "x != 0" clause dropped: chi_0(0) = 1 bug.
double mutated_chi(double a, double x) { return x >= a ? 1.0 : 0.0; }

void check_g_lemma(VerifyReport& report) {
    CheckResult c{"g-lemma"};
    const std::vector<double> probe{0.0, 0.25, 0.5, 0.75, 1.0};
    for (int n = 1; n <= 4 && c.passed; ++n) {
        for (double b : probe) {
            auto g = build_G(n, Param(b));
            std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
            std::vector<double> x(static_cast<std::size_t>(n));
            for (;;) {
                bool zeros = true, ones = true;
                for (int i = 0; i < n; ++i) {
                    x[static_cast<std::size_t>(i)] = probe[idx[static_cast<std::size_t>(i)]];
                    zeros = zeros && idx[static_cast<std::size_t>(i)] == 0;
                    ones = ones && idx[static_cast<std::size_t>(i)] == probe.size() - 1;
                }
                double expect = zeros ? 0.0 : ones ? 1.0 : b;
                double got = evaluate(*g, x);
                if (got != expect) {
                    c.passed = false;
                    c.max_error = std::abs(got - expect);
                    c.witness = Witness{x, expect, got, "constant block value"};
                    break;
                }
                int d = n - 1;
                while (d >= 0 && idx[static_cast<std::size_t>(d)] == probe.size() - 1) {
                    idx[static_cast<std::size_t>(d)] = 0;
                    --d;
                }
                if (d < 0) break;
                ++idx[static_cast<std::size_t>(d)];
            }
            if (!c.passed) break;
        }
    }
    report.add(std::move(c));
}

void check_h_lemma(VerifyReport& report, std::uint64_t seed, int pairs) {
    CheckResult c{"h-lemma"};
    Rng rng(seed);
    const int k = 4;
    const auto& reg = catalog::entries();
    for (int t = 0; t < pairs && c.passed; ++t) {
        const auto& entry = reg[static_cast<std::size_t>(rng.below(static_cast<int>(reg.size())))];
        int n = 1 + rng.below(3);
        if (!entry.supports(n)) {
            --t;
            continue;
        }
        AggFunction f = entry.make(n);
        std::vector<GridPoint> a;
        bool zeros = true, ones = true;
        for (int i = 0; i < n; ++i) {
            int v = rng.below(k + 1);
            zeros = zeros && v == 0;
            ones = ones && v == k;
            a.emplace_back(v, k);
        }
        if (zeros || ones) {
            --t;
            continue;
        }
        std::vector<double> av;
        for (const auto& g : a) av.push_back(g.to_double());
        double fa = f(av);
        auto h = build_h(f, a);
        for (const auto& x : grid_points(n, k)) {
            bool top = true;
            for (double v : x) top = top && v == 1.0;
            bool above = leq(av, x);
            double expect = top ? 1.0 : above ? fa : 0.0;
            double got = evaluate(*h, x);
            double err = std::abs(got - expect);
            bool ok = (top || !above) ? got == expect : err <= kTol;
            c.max_error = std::max(c.max_error, err);
            if (!ok) {
                c.passed = false;
                c.witness = Witness{x, expect, got, "h-block tri-valued contract, f=" + f.name() +
                                                        ", a=" + vec_str(av)};
                break;
            }
        }
    }
    report.add(std::move(c));
}

void check_representation(VerifyReport& report, std::uint64_t seed) {
    CheckResult c{"representation"};
    struct Case {
        const char* fn;
        int n;
        int k;
    };
    const Case cases[] = {{"product", 2, 4}, {"min", 2, 3}, {"lukasiewicz", 2, 4},
                          {"max", 2, 4},     {"product", 3, 2}};
    Rng rng(seed);
    for (const auto& cs : cases) {
        AggFunction f = catalog::get(cs.fn, cs.n);
        auto [expr, rep] = compile_grid(f, cs.k);
        for (const auto& p : grid_points(cs.n, cs.k)) {
            double fx = f(p), cx = evaluate(*expr, p);
            if (fx != cx) {
                c.passed = false;
                c.witness = Witness{p, fx, cx, std::string("grid exactness, fn=") + cs.fn};
                break;
            }
        }
        std::vector<double> x(static_cast<std::size_t>(cs.n));
        for (int t = 0; t < 200 && c.passed; ++t) {
            for (int i = 0; i < cs.n; ++i) x[static_cast<std::size_t>(i)] = rng.unit();
            double cx = evaluate(*expr, x);
            double ox = grid_oracle(f, cs.k, InputVector(x)).value();
            double err = std::abs(cx - ox);
            c.max_error = std::max(c.max_error, err);
            if (err > kTol) {
                c.passed = false;
                c.witness = Witness{x, ox, cx, std::string("oracle equivalence, fn=") + cs.fn};
            } else if (cx > f(x) + kTol) {
                c.passed = false;
                c.witness = Witness{x, f(x), cx, std::string("lower bound, fn=") + cs.fn};
            }
        }
        if (!c.passed) break;
    }
    report.add(std::move(c));
}

double brute_left_sup(const StepFn1D& f, double cpt) {
    double sup = 0.0;
    std::vector<double> samples{cpt - 1e-12, cpt / 2.0};
    for (double b : f.breakpoints()) {
        if (b < cpt) {
            samples.push_back(b);
            samples.push_back(b + (cpt - b) / 2.0);
        }
    }
    for (double s : samples)
        if (s > 0.0 && s < cpt) sup = std::max(sup, f(s));
    return sup;
}

void check_unary(VerifyReport& report, std::uint64_t seed) {
    CheckResult c{"unary-exact"};
    CheckResult j{"jump-set"};
    Rng rng(seed);

    std::vector<StepFn1D> cases;
    cases.push_back(StepFn1D::right_attained({0.5}, {0.0, 0.5}));
    cases.push_back(StepFn1D::right_attained({1.0 / 3.0, 2.0 / 3.0}, {0.0, 1.0 / 3.0, 2.0 / 3.0}));
    for (int t = 0; t < 10; ++t) {
        // random right-attained staircase over tenths, starting at 0
        std::vector<double> breaks;
        for (int i = 1; i <= 9; ++i)
            if (rng.unit() < 0.4) breaks.push_back(i / 10.0);
        if (breaks.empty()) breaks.push_back(0.5);
        std::vector<double> vals{0.0};
        double v = 0.0;
        for (std::size_t i = 0; i < breaks.size(); ++i) {
            v += (1.0 - v) * rng.unit();
            vals.push_back(v);
        }
        cases.push_back(StepFn1D::right_attained(std::move(breaks), std::move(vals)));
    }

    const int m = 10;
    for (const auto& f : cases) {
        auto expr = compile_unary_exact(f, m);
        std::vector<double> xs;
        for (int t = 0; t < 500; ++t) xs.push_back(rng.unit());
        xs.push_back(0.0);
        xs.push_back(1.0);
        for (double b : f.breakpoints()) xs.push_back(b);
        for (double x : xs) {
            double fx = f(x);
            double cx = evaluate(*expr, std::span<const double>(&x, 1));
            if (fx != cx) {
                c.passed = false;
                c.witness = Witness{{x}, fx, cx, "unary compiler must reproduce f"};
                break;
            }
        }
        auto jumps = jump_set(f);
        std::vector<double> brute;
        for (double cpt : f.breakpoints())
            if (brute_left_sup(f, cpt) < f(cpt)) brute.push_back(cpt);
        bool same = jumps.size() == brute.size();
        for (std::size_t i = 0; same && i < jumps.size(); ++i)
            same = jumps[i].value() == brute[i];
        if (!same) {
            j.passed = false;
            j.witness = Witness{f.breakpoints(), static_cast<double>(brute.size()),
                                static_cast<double>(jumps.size()),
                                "jump set vs brute-force left-sup scan"};
        }
        if (!c.passed || !j.passed) break;
    }
    report.add(std::move(c));
    report.add(std::move(j));
}

void check_mutations(VerifyReport& report) {
    {
        // injected bug chi_0(0) = 1 must be caught by the constant-block check
        CheckResult c{"mutation-chi-detected"};
        auto g = build_G(2, Param(0.5));
        std::vector<double> zeros{0.0, 0.0};
        double healthy = evaluate(*g, zeros);
        double mutated = evaluate_with_chi(*g, zeros, &mutated_chi);
        c.max_error = std::abs(mutated - healthy);
        if (healthy != 0.0 || mutated == 0.0) {
            c.passed = false;
        }
        c.witness = Witness{zeros, 0.0, mutated, "mutated chi drops the x != 0 clause"};
        report.add(std::move(c));
    }
    {
        // h-block that meets over all coordinates (not just the support)
        // must violate the tri-valued contract at a point with a zero entry
        CheckResult c{"mutation-h-detected"};
        AggFunction f = catalog::get("max", 2);
        std::vector<GridPoint> a{{1, 2}, {0, 2}};
        std::vector<double> av{0.5, 0.0};
        double fa = f(av);
        auto mutated = BasisExpr::meet(
            {build_G(2, Param(fa)),
             BasisExpr::chi(Param(a[0]), BasisExpr::proj(0, 2)),
             BasisExpr::chi(Param(a[1]), BasisExpr::proj(1, 2))});
        std::vector<double> x{0.5, 0.0}; // x >= a, not the top corner
        double expect = fa;              // tri-valued contract value
        double got = evaluate(*mutated, x);
        c.max_error = std::abs(got - expect);
        if (got == expect) c.passed = false;
        c.witness = Witness{x, expect, got, "mutated h-block meets over zero coordinates"};
        report.add(std::move(c));
    }
}

} // namespace

VerifyReport lemma_suite(std::uint64_t seed) {
    VerifyReport report;
    check_g_lemma(report);
    check_h_lemma(report, seed, 100);
    check_representation(report, seed + 1);
    check_unary(report, seed + 2);
    check_mutations(report);
    return report;
}

} // namespace agg
