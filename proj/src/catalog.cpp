#include "agg/catalog.hpp"

#include "agg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace agg::catalog {

namespace {

AggFunction make_simple(std::string name, int arity,
                        double (*reduce)(std::span<const double>)) {
    return AggFunction(std::move(name), arity,
                       [reduce](std::span<const double> x) { return reduce(x); },
                       Provenance::catalog);
}

double product_of(std::span<const double> x) {
    double p = 1.0;
    for (double v : x) p *= v;
    return p;
}

double min_of(std::span<const double> x) {
    double m = x[0];
    for (double v : x) m = std::min(m, v);
    return m;
}

double max_of(std::span<const double> x) {
    double m = x[0];
    for (double v : x) m = std::max(m, v);
    return m;
}

double mean_of(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double median_of(std::span<const double> x) {
    std::vector<double> v(x.begin(), x.end());
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

double lukasiewicz_of(std::span<const double> x) {
    return std::max(0.0, x[0] + x[1] - 1.0);
}

double drastic_of(std::span<const double> x) {
    if (x[0] == 1.0) return x[1];
    if (x[1] == 1.0) return x[0];
    return 0.0;
}

double probsum_of(std::span<const double> x) {
    double p = 1.0;
    for (double v : x) p *= 1.0 - v;
    return 1.0 - p;
}

std::vector<CatalogEntry> build_registry() {
    std::vector<CatalogEntry> reg;
    auto add = [&](CatalogEntry e) { reg.push_back(std::move(e)); };

    add({"product", "x_0 * ... * x_{n-1}", std::nullopt, false,
         [](int n) { return make_simple("product", n, &product_of); }, 1.0, 0.0, 1.0});
    add({"min", "smallest coordinate", std::nullopt, false,
         [](int n) { return make_simple("min", n, &min_of); }, 1.0, 0.0, 1.0});
    add({"max", "largest coordinate", std::nullopt, false,
         [](int n) { return make_simple("max", n, &max_of); }, 1.0, 1.0, 0.0});
    add({"mean", "arithmetic mean", std::nullopt, false,
         [](int n) { return make_simple("mean", n, &mean_of); }, 1.0, std::nullopt,
         std::nullopt});
    add({"median", "middle order statistic (odd arity)", std::nullopt, true,
         [](int n) { return make_simple("median", n, &median_of); }, 1.0, std::nullopt,
         std::nullopt});
    add({"lukasiewicz", "max(0, x+y-1)", 2, false,
         [](int n) { return make_simple("lukasiewicz", n, &lukasiewicz_of); }, 1.0, 0.0,
         1.0});
    add({"drastic", "drastic product", 2, false,
         [](int n) { return make_simple("drastic", n, &drastic_of); }, std::nullopt, 0.0,
         1.0});
    add({"probsum", "1 - prod(1-x_i)", std::nullopt, false,
         [](int n) { return make_simple("probsum", n, &probsum_of); }, 1.0, 1.0, 0.0});
    add({"bmedian", "median of {x, y, 1/2}", 2, false,
         [](int) { return b_median(0.5); }, 1.0, std::nullopt, std::nullopt});
    add({"wmean3", "weighted mean, weights (0.5, 0.3, 0.2)", 3, false,
         [](int) { return weighted_mean3(0.5, 0.3, 0.2); }, 0.5, std::nullopt,
         std::nullopt});
    add({"chi", "threshold indicator at 1/2", 1, false,
         [](int) { return chi_agg(0.5); }, std::nullopt, std::nullopt, std::nullopt});
    add({"constb", "0 at the bottom corner, 1 at the top, 1/2 elsewhere",
         std::nullopt, false, [](int n) { return constant_off_boundary(n, 0.5); },
         std::nullopt, std::nullopt, std::nullopt});

    // registration probes: every entry must behave as an aggregation function
    for (const auto& e : reg) {
        for (int n = 1; n <= 3; ++n) {
            if (!e.supports(n)) continue;
            auto rep = check_aggregation(e.make(n), 3, 40);
            if (!rep.all_passed())
                throw std::logic_error("catalog entry '" + e.name +
                                       "' failed registration probes:\n" + rep.to_text());
        }
    }
    return reg;
}

} // namespace

const std::vector<CatalogEntry>& entries() {
    static const std::vector<CatalogEntry> reg = build_registry();
    return reg;
}

const CatalogEntry& entry(const std::string& name) {
    for (const auto& e : entries())
        if (e.name == name) return e;
    throw std::invalid_argument("catalog: unknown function '" + name + "'");
}

AggFunction get(const std::string& name, int arity) {
    const CatalogEntry& e = entry(name);
    if (!e.supports(arity))
        throw std::invalid_argument("catalog: '" + name + "' does not support arity " +
                                    std::to_string(arity));
    return e.make(arity);
}

AggFunction g_phi(std::function<double(double)> phi) {
    if (!phi) throw std::invalid_argument("g_phi: missing phi");
    return AggFunction("g_phi", 2,
                       [phi = std::move(phi)](std::span<const double> x) {
                           double s = x[0] + x[1];
                           if (s < 1.0) return 0.0;
                           if (s > 1.0) return 1.0;
                           return UnitValue(phi(x[0])).value();
                       },
                       Provenance::g_phi);
}

AggFunction b_median(double b) {
    UnitValue bu(b);
    return AggFunction("bmedian(" + std::to_string(b) + ")", 2,
                       [b = bu.value()](std::span<const double> x) {
                           return med_b(b, x[0], x[1]);
                       },
                       Provenance::catalog);
}

AggFunction chi_agg(double a) {
    UnitValue au(a);
    return AggFunction("chi(" + std::to_string(a) + ")", 1,
                       [a = au.value()](std::span<const double> x) { return chi(a, x[0]); },
                       Provenance::catalog);
}

AggFunction constant_off_boundary(int arity, double b) {
    UnitValue bu(b);
    return AggFunction("constb(" + std::to_string(b) + ")", arity,
                       [b = bu.value()](std::span<const double> x) {
                           bool zeros = true, ones = true;
                           for (double v : x) {
                               zeros = zeros && v == 0.0;
                               ones = ones && v == 1.0;
                           }
                           if (zeros) return 0.0;
                           if (ones) return 1.0;
                           return b;
                       },
                       Provenance::catalog);
}

AggFunction weighted_mean3(double w0, double w1, double w2) {
    if (!(w0 >= 0 && w1 >= 0 && w2 >= 0) || std::abs(w0 + w1 + w2 - 1.0) > 1e-12)
        throw std::invalid_argument("weighted_mean3: weights must be nonnegative and sum to 1");
    return AggFunction("wmean3", 3,
                       [w0, w1, w2](std::span<const double> x) {
                           double s = w0 * x[0] + w1 * x[1] + w2 * x[2];
                           return std::min(1.0, s);
                       },
                       Provenance::catalog);
}

} // namespace agg::catalog
