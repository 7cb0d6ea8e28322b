#pragma once

#include "agg/core.hpp"
#include "agg/verify.hpp"

#include <functional>
#include <string>

namespace agg {

/// Fuzzy negation: N(0) = 1, N(1) = 0, strictly decreasing (validated on a
/// probe grid at construction). The strong flag records whether N is an
/// involution on the probes.
class Negation {
public:
    Negation(std::string name, std::function<double(double)> fn);
    static const Negation& zadeh(); // N(x) = 1 - x

    double operator()(double x) const { return fn_(x); }
    bool is_strong() const noexcept { return strong_; }
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
    std::function<double(double)> fn_;
    bool strong_ = false;
};

/// A fuzzy implication. Deliberately not an AggFunction: it is
/// nonincreasing in its first argument and must not enter the catalog.
struct Implication {
    std::string name;
    std::function<double(double, double)> fn;
    double operator()(double x, double y) const { return fn(x, y); }
};

/// f(0,y) = 0 = f(x,0) on a grid plus random probes.
bool has_annihilator_zero(const AggFunction& f, int probes = 64,
                          std::uint64_t seed = kDefaultSeed);
/// f(1,y) = 1 = f(x,1), the dual condition (needed by the disjunctive form).
bool has_annihilator_one(const AggFunction& f, int probes = 64,
                         std::uint64_t seed = kDefaultSeed);

/// I(x,y) = N(conj(x, N(y))) for a binary aggregation function with
/// annihilator 0 and a strong negation. min yields Kleene-Dienes,
/// product yields Reichenbach.
Implication implication_from(const AggFunction& conj, const Negation& neg);

/// The companion form I(x,y) = disj(N(x), y) for a binary aggregation
/// function with annihilator 1 (e.g. max, probabilistic sum).
Implication implication_from_disj(const AggFunction& disj, const Negation& neg);

/// Five-point implication contract: I(0,0) = 1, I(1,1) = 1, I(1,0) = 0,
/// nonincreasing in x, nondecreasing in y, probed on a (grid_k+1)^2 grid.
VerifyReport check_implication_contract(const Implication& impl, int grid_k = 16);

} // namespace agg
