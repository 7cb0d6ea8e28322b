#pragma once

#include "agg/core.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace agg {

/// Fixed default seed for every randomized check; pass another seed to
/// reproduce a different run.
inline constexpr std::uint64_t kDefaultSeed = 42;

/// Deterministic uniform source. The engine output is mapped to doubles
/// explicitly so results do not depend on the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    /// Uniform in [0,1).
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    std::uint64_t next() { return eng_(); }
    int below(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }

private:
    std::mt19937_64 eng_;
};

struct Witness {
    std::vector<double> input;
    double expected = 0.0;
    double actual = 0.0;
    std::string note;

    nlohmann::json to_json() const;
};

struct CheckResult {
    std::string name;
    bool passed = true;
    double max_error = 0.0;
    std::optional<Witness> witness; // always present when failed

    nlohmann::json to_json() const;
};

class VerifyReport {
public:
    void add(CheckResult r) { checks_.push_back(std::move(r)); }
    const std::vector<CheckResult>& checks() const noexcept { return checks_; }
    bool all_passed() const;
    double max_error() const;
    const CheckResult* find(const std::string& name) const;

    nlohmann::json to_json() const;
    std::string to_text() const;

private:
    std::vector<CheckResult> checks_;
};

/// Verifies the aggregation-function axioms: exact boundary values, and
/// monotonicity on all comparable pairs of the I_grid_k^n grid plus
/// random_pairs random comparable pairs. Failures are report entries.
VerifyReport check_aggregation(const AggFunction& f, int grid_k, int random_pairs,
                               std::uint64_t seed = kDefaultSeed);

/// Gap measurement between a function and a compiled lower approximation.
struct ApproxError {
    double max_gap = 0.0;
    double mean_gap = 0.0;
    bool lower_bound_ok = true;         // compiled <= f + 1e-12 everywhere probed
    bool grid_checked = false;
    bool grid_exact = true;             // equality at every point of I_grid_k^n
    std::optional<Witness> lower_violation;
    std::optional<Witness> grid_witness;

    bool ok() const { return lower_bound_ok && (!grid_checked || grid_exact); }
    nlohmann::json to_json() const;
};

/// Samples uniform random points, measures f(x) - compiled(x), flags any
/// lower-bound violation, and (for grid_k >= 1) checks exactness on the
/// compile grid.
ApproxError approx_error(const AggFunction& f, const BasisExpr& e, int samples,
                         std::uint64_t seed = kDefaultSeed, int grid_k = 0);
inline ApproxError approx_error(const AggFunction& f, const ExprPtr& e, int samples,
                                std::uint64_t seed = kDefaultSeed, int grid_k = 0) {
    return approx_error(f, *e, samples, seed, grid_k);
}

/// The bundled per-lemma oracle suites (constant blocks, h-blocks, grid
/// representation, unary exact compiler) plus the injected-bug detectors
/// that guard against a vacuous suite.
VerifyReport lemma_suite(std::uint64_t seed = kDefaultSeed);

} // namespace agg
