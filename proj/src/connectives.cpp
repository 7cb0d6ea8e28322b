#include "agg/connectives.hpp"

#include <cmath>
#include <stdexcept>

namespace agg {

namespace {

constexpr double kTol = 1e-12;
constexpr int kNegProbeGrid = 32;

} // namespace

Negation::Negation(std::string name, std::function<double(double)> fn)
    : name_(std::move(name)), fn_(std::move(fn)) {
    if (!fn_) throw std::invalid_argument("Negation: missing function");
    if (fn_(0.0) != 1.0 || fn_(1.0) != 0.0)
        throw std::invalid_argument("Negation '" + name_ + "': must map 0 to 1 and 1 to 0");
    double prev = fn_(0.0);
    bool strong = true;
    for (int i = 1; i <= kNegProbeGrid; ++i) {
        double x = static_cast<double>(i) / kNegProbeGrid;
        double v = fn_(x);
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("Negation '" + name_ + "': values must stay in [0,1]");
        if (!(v < prev))
            throw std::invalid_argument("Negation '" + name_ + "': must be strictly decreasing");
        prev = v;
    }
    for (int i = 0; i <= kNegProbeGrid; ++i) {
        double x = static_cast<double>(i) / kNegProbeGrid;
        if (std::abs(fn_(fn_(x)) - x) > kTol) {
            strong = false;
            break;
        }
    }
    strong_ = strong;
}

const Negation& Negation::zadeh() {
    static const Negation n("zadeh", [](double x) { return 1.0 - x; });
    return n;
}

namespace {

bool annihilator_at(const AggFunction& f, double z, int probes, std::uint64_t seed) {
    if (f.arity() != 2)
        throw std::invalid_argument("annihilator check: binary function required");
    auto pinned = [&](double v) { return f({z, v}) == z && f({v, z}) == z; };
    for (int i = 0; i <= 16; ++i)
        if (!pinned(static_cast<double>(i) / 16.0)) return false;
    Rng rng(seed);
    for (int t = 0; t < probes; ++t)
        if (!pinned(rng.unit())) return false;
    return true;
}

} // namespace

bool has_annihilator_zero(const AggFunction& f, int probes, std::uint64_t seed) {
    return annihilator_at(f, 0.0, probes, seed);
}

bool has_annihilator_one(const AggFunction& f, int probes, std::uint64_t seed) {
    return annihilator_at(f, 1.0, probes, seed);
}

Implication implication_from(const AggFunction& conj, const Negation& neg) {
    if (conj.arity() != 2)
        throw std::invalid_argument("implication_from: conjunction must be binary");
    if (!has_annihilator_zero(conj))
        throw std::invalid_argument("implication_from: '" + conj.name() +
                                    "' lacks annihilator 0");
    if (!neg.is_strong())
        throw std::invalid_argument("implication_from: negation '" + neg.name() +
                                    "' is not strong");
    std::string name = "sn(" + conj.name() + ", " + neg.name() + ")";
    return Implication{std::move(name), [conj, neg](double x, double y) {
                           return neg(conj({x, neg(y)}));
                       }};
}

Implication implication_from_disj(const AggFunction& disj, const Negation& neg) {
    if (disj.arity() != 2)
        throw std::invalid_argument("implication_from_disj: disjunction must be binary");
    if (!has_annihilator_one(disj))
        throw std::invalid_argument("implication_from_disj: '" + disj.name() +
                                    "' lacks annihilator 1");
    if (!neg.is_strong())
        throw std::invalid_argument("implication_from_disj: negation '" + neg.name() +
                                    "' is not strong");
    std::string name = "ds(" + disj.name() + ", " + neg.name() + ")";
    return Implication{std::move(name), [disj, neg](double x, double y) {
                           return disj({neg(x), y});
                       }};
}

VerifyReport check_implication_contract(const Implication& impl, int grid_k) {
    if (grid_k < 1) throw std::invalid_argument("check_implication_contract: grid_k >= 1");
    VerifyReport report;
    auto point = [&](const char* name, double x, double y, double expect) {
        CheckResult c{name};
        double got = impl(x, y);
        c.max_error = std::abs(got - expect);
        if (c.max_error > kTol) {
            c.passed = false;
            c.witness = Witness{{x, y}, expect, got, ""};
        }
        report.add(std::move(c));
    };
    point("implication-0-0", 0.0, 0.0, 1.0);
    point("implication-1-1", 1.0, 1.0, 1.0);
    point("implication-1-0", 1.0, 0.0, 0.0);

    CheckResult mx{"implication-antitone-x"};
    CheckResult my{"implication-monotone-y"};
    for (int j = 0; j <= grid_k; ++j) {
        double y = static_cast<double>(j) / grid_k;
        for (int i = 0; i + 1 <= grid_k; ++i) {
            double x0 = static_cast<double>(i) / grid_k;
            double x1 = static_cast<double>(i + 1) / grid_k;
            double v0 = impl(x0, y), v1 = impl(x1, y);
            if (v1 > v0 + kTol && mx.passed) {
                mx.passed = false;
                mx.witness = Witness{{x0, y}, v0, v1,
                                     "I must be nonincreasing in x; second point x=" +
                                         std::to_string(x1)};
            }
            double w0 = impl(y, x0), w1 = impl(y, x1);
            if (w1 < w0 - kTol && my.passed) {
                my.passed = false;
                my.witness = Witness{{y, x0}, w0, w1,
                                     "I must be nondecreasing in y; second point y=" +
                                         std::to_string(x1)};
            }
        }
    }
    report.add(std::move(mx));
    report.add(std::move(my));
    return report;
}

} // namespace agg
