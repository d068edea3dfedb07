#ifndef GBM_OCCUPATION_HPP
#define GBM_OCCUPATION_HPP

// Occupation measures and local-time estimation, level-crossing counting of
// piecewise-linear paths, the Banach-Kac identity, the existence integral of
// the local-time criterion, and the crossings-to-local-time approximation.

#include <functional>
#include <span>
#include <vector>

#include "gbm/kernel.hpp"
#include "gbm/paths.hpp"
#include "gbm/regularize.hpp"
#include "gbm/specfun.hpp"

namespace gbm {

// Histogram estimate of the occupation density L(x, I): time spent per bin
// divided by the bin width. Computed by exact time-in-bin accounting for the
// piecewise-linear interpolant, not by point counting, so the total mass
// equals |I| exactly (when the edges cover the path range).
struct OccupationDensity {
    std::vector<double> bin_edges;
    std::vector<double> density; // mass per unit length, one per bin
    double interval_length = 0.0;

    double total_mass() const;
};

// Explicit edges (strictly increasing). `delta` is the time spacing of the
// consecutive `values`. A constant path has an atomic occupation measure and
// is rejected.
OccupationDensity occupation_density(std::span<const double> values, double delta,
                                     std::vector<double> edges);

// nbins <= 0 selects the default rule ceil(range / (2 std(increments)))
// clamped to [16, 512]; edges then span exactly [min, max] of the values.
OccupationDensity occupation_density(std::span<const double> values, double delta, int nbins = 0);

// Occupation formula cross-check: lhs = \int_I f(B(s)) ds by the trapezoid
// rule, rhs = sum over bins of f(midpoint) * density * width.
struct OccupationFormulaCheck {
    double lhs;
    double rhs;
};
OccupationFormulaCheck occupation_formula_check(std::span<const double> values, double delta,
                                                const std::function<double(double)>& f,
                                                int nbins = 0);

struct CrossingCount {
    double level;
    long count;
};

// Number of solutions of path(t) = level for the piecewise-linear
// interpolant. Tie-break rule: grid values exactly at the level count once
// when the sign strictly changes across the adjacent segments; tangential
// touches and on-level plateaus without a subsequent sign change do not
// count (equivalently: sign alternations of the zero-compressed sequence of
// value-minus-level signs).
CrossingCount count_crossings(std::span<const double> values, double level);

// \int f(x) C(x, I) dx on a level grid: per bin the exact crossing length
// (total length of path-value overlap with the bin) times f at the bin
// midpoint. With f == 1 this is exactly the total variation.
double crossings_level_integral(std::span<const double> values,
                                const std::vector<double>& edges,
                                const std::function<double(double)>& f);

// Derivative side of the Banach-Kac identity,
//   \int_I f(B^eps(t)) |d/dt B^eps(t)| dt,
// evaluated segment-exactly for the piecewise-linear model of the
// regularized values (trapezoid in the value variable), which makes it
// agree with the crossing side up to pure quadrature error in f.
double banach_kac_functional(const RegularizedPath& reg, const std::function<double(double)>& f);

// Closed form of \int_0^1\int_0^1 |t-s|^{-alpha/2} ds dt = 8/((2-alpha)(4-alpha)).
double berman_time_integral(double alpha);

// Existence certificate: sqrt(2) * (\int_R E_beta(-r^2) dr) * 8/((2-a)(4-a));
// finiteness is the criterion for a square-integrable local time.
double berman_existence_value(const GreyParams& params, const EvalConfig& cfg = {});

// The crossings-to-local-time approximation on a path carrying its realized
// mixing variable: scaled_crossings = eps^{1-alpha/2} sqrt(pi/2) C_psi^{-1}
// times the Banach-Kac functional of the regularized path, against
// target = sqrt(Y) \int_I f(B(t)) dt.
struct CrossingsLocalTime {
    double scaled_crossings;
    double target;
};
CrossingsLocalTime crossings_local_time_approx(const SamplePath& path, const Kernel& kernel,
                                               double epsilon,
                                               const std::function<double(double)>& f);

} // namespace gbm

#endif
