#pragma once

#include "agg/core.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace agg::catalog {

/// A registered aggregation function family with its analytic metadata.
/// lipschitz is a per-coordinate bound L valid for every supported arity:
/// |f(x) - f(y)| <= L * sum_i |x_i - y_i|.
struct CatalogEntry {
    std::string name;
    std::string summary;
    std::optional<int> fixed_arity; // empty = any n >= 1
    bool odd_arity_only = false;
    std::function<AggFunction(int)> make;
    std::optional<double> lipschitz;
    std::optional<double> annihilator;
    std::optional<double> neutral;

    bool supports(int arity) const {
        if (arity < 1) return false;
        if (fixed_arity) return arity == *fixed_arity;
        if (odd_arity_only) return arity % 2 == 1;
        return true;
    }
};

/// The registry. Every entry has passed boundary and monotonicity probes.
const std::vector<CatalogEntry>& entries();

const CatalogEntry& entry(const std::string& name);

AggFunction get(const std::string& name, int arity);

/// Binary function valued 0 below the anti-diagonal, phi(x) on it, 1 above
/// it. An aggregation function for arbitrary phi: [0,1] -> [0,1]; used as a
/// randomized test-subject generator.
AggFunction g_phi(std::function<double(double)> phi);

// Parameterized constructors behind the default registry instances.
AggFunction b_median(double b);
AggFunction chi_agg(double a);
AggFunction constant_off_boundary(int arity, double b);
AggFunction weighted_mean3(double w0, double w1, double w2);

} // namespace agg::catalog
