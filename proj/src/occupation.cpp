#include "gbm/occupation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gbm/errors.hpp"
#include "gbm/quadrature.hpp"

namespace gbm {

namespace {

// Distribute `amount` over the bins proportionally to the overlap of
// [lo, hi] with each bin (linear occupancy within a segment).
void deposit_segment(const std::vector<double>& edges, std::vector<double>& acc, double lo,
                     double hi, double amount) {
    if (hi < lo) std::swap(lo, hi);
    const double span = hi - lo;
    const std::size_t nbins = edges.size() - 1;
    if (span == 0.0) {
        // Flat segment: everything into the containing bin.
        if (lo < edges.front() || lo > edges.back()) return;
        std::size_t b = static_cast<std::size_t>(
            std::upper_bound(edges.begin(), edges.end(), lo) - edges.begin());
        b = (b == 0) ? 0 : std::min(b - 1, nbins - 1);
        acc[b] += amount;
        return;
    }
    const auto first = std::upper_bound(edges.begin(), edges.end(), lo);
    std::size_t b = (first == edges.begin())
                        ? 0
                        : static_cast<std::size_t>(first - edges.begin()) - 1;
    for (; b < nbins; ++b) {
        if (edges[b] >= hi) break;
        const double o_lo = std::max(lo, edges[b]);
        const double o_hi = std::min(hi, edges[b + 1]);
        if (o_hi > o_lo) acc[b] += amount * (o_hi - o_lo) / span;
    }
}

int default_bin_count(std::span<const double> values) {
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    const double range = *mx - *mn;
    double sum2 = 0.0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double d = values[i + 1] - values[i];
        sum2 += d * d;
    }
    const double std_inc = std::sqrt(sum2 / static_cast<double>(values.size() - 1));
    if (std_inc == 0.0) return 16;
    const int n = static_cast<int>(std::ceil(range / (2.0 * std_inc)));
    return std::clamp(n, 16, 512);
}

} // namespace

double OccupationDensity::total_mass() const {
    double m = 0.0;
    for (std::size_t b = 0; b + 1 < bin_edges.size(); ++b)
        m += density[b] * (bin_edges[b + 1] - bin_edges[b]);
    return m;
}

OccupationDensity occupation_density(std::span<const double> values, double delta,
                                     std::vector<double> edges) {
    if (values.size() < 2)
        throw std::invalid_argument("occupation_density: need at least 2 grid points");
    if (edges.size() < 2)
        throw std::invalid_argument("occupation_density: need at least 2 bin edges");
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        if (!(edges[i] < edges[i + 1]))
            throw std::invalid_argument("occupation_density: edges must increase");

    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    if (*mn == *mx)
        throw EvaluationError(
            "occupation_density: constant path, occupation measure is atomic (no density)");

    OccupationDensity out;
    out.bin_edges = std::move(edges);
    out.density.assign(out.bin_edges.size() - 1, 0.0);
    out.interval_length = delta * static_cast<double>(values.size() - 1);

    std::vector<double> mass(out.density.size(), 0.0);
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        deposit_segment(out.bin_edges, mass, values[i], values[i + 1], delta);
    for (std::size_t b = 0; b < mass.size(); ++b)
        out.density[b] = mass[b] / (out.bin_edges[b + 1] - out.bin_edges[b]);
    return out;
}

OccupationDensity occupation_density(std::span<const double> values, double delta, int nbins) {
    if (values.size() < 2)
        throw std::invalid_argument("occupation_density: need at least 2 grid points");
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    if (*mn == *mx)
        throw EvaluationError(
            "occupation_density: constant path, occupation measure is atomic (no density)");
    if (nbins <= 0) nbins = default_bin_count(values);
    std::vector<double> edges(static_cast<std::size_t>(nbins) + 1);
    for (int b = 0; b <= nbins; ++b)
        edges[b] = *mn + (*mx - *mn) * static_cast<double>(b) / nbins;
    edges.back() = *mx;
    return occupation_density(values, delta, std::move(edges));
}

OccupationFormulaCheck occupation_formula_check(std::span<const double> values, double delta,
                                                const std::function<double(double)>& f,
                                                int nbins) {
    OccupationDensity occ = occupation_density(values, delta, nbins);

    double lhs = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double w = (i == 0 || i + 1 == values.size()) ? 0.5 : 1.0;
        lhs += w * f(values[i]);
    }
    lhs *= delta;

    double rhs = 0.0;
    for (std::size_t b = 0; b + 1 < occ.bin_edges.size(); ++b) {
        const double width = occ.bin_edges[b + 1] - occ.bin_edges[b];
        rhs += f(0.5 * (occ.bin_edges[b] + occ.bin_edges[b + 1])) * occ.density[b] * width;
    }
    return {lhs, rhs};
}

CrossingCount count_crossings(std::span<const double> values, double level) {
    long count = 0;
    int last_sign = 0;
    for (double v : values) {
        const int s = (v > level) - (v < level);
        if (s == 0) continue;
        if (last_sign != 0 && s != last_sign) ++count;
        last_sign = s;
    }
    return {level, count};
}

double crossings_level_integral(std::span<const double> values, const std::vector<double>& edges,
                                const std::function<double(double)>& f) {
    if (edges.size() < 2)
        throw std::invalid_argument("crossings_level_integral: need at least 2 edges");
    std::vector<double> length(edges.size() - 1, 0.0);
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        double lo = values[i], hi = values[i + 1];
        if (hi < lo) std::swap(lo, hi);
        if (hi == lo) continue; // measure zero in the level variable
        const std::size_t nbins = length.size();
        for (std::size_t b = 0; b < nbins; ++b) {
            if (edges[b] >= hi) break;
            const double o_lo = std::max(lo, edges[b]);
            const double o_hi = std::min(hi, edges[b + 1]);
            if (o_hi > o_lo) length[b] += o_hi - o_lo;
        }
    }
    double total = 0.0;
    for (std::size_t b = 0; b < length.size(); ++b)
        total += f(0.5 * (edges[b] + edges[b + 1])) * length[b];
    return total;
}

double banach_kac_functional(const RegularizedPath& reg, const std::function<double(double)>& f) {
    if (reg.values.size() < 2)
        throw std::invalid_argument("banach_kac_functional: need at least 2 values");
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < reg.values.size(); ++i) {
        const double v0 = reg.values[i], v1 = reg.values[i + 1];
        total += 0.5 * (f(v0) + f(v1)) * std::abs(v1 - v0);
    }
    return total;
}

double berman_time_integral(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("berman_time_integral: alpha must lie in (0,2)");
    return 8.0 / ((2.0 - alpha) * (4.0 - alpha));
}

double berman_existence_value(const GreyParams& params, const EvalConfig& cfg) {
    params.validate();
    auto integrand = [&](double r) { return mittag_leffler(params.beta, -r * r, cfg); };
    // E_beta(-r^2) ~ r^{-2}/Gamma(1-beta) at infinity, so the line integral
    // converges for every beta in (0,1].
    QuadResult r_int = integrate_semi_infinite(integrand, 0.0, 1e-9);
    if (!r_int.converged)
        throw EvaluationError("berman_existence_value: r-integral did not converge");
    return std::numbers::sqrt2 * 2.0 * r_int.value * berman_time_integral(params.alpha);
}

CrossingsLocalTime crossings_local_time_approx(const SamplePath& path, const Kernel& kernel,
                                               double epsilon,
                                               const std::function<double(double)>& f) {
    if (!path.mixing)
        throw std::invalid_argument(
            "crossings_local_time_approx: path must carry its realized mixing variable");
    const double alpha = path.params.alpha;
    RegularizedPath reg = regularize_path(path, kernel, epsilon);
    const double c = c_psi(kernel, alpha);
    const double scaled = std::pow(epsilon, 1.0 - 0.5 * alpha) *
                          std::sqrt(0.5 * std::numbers::pi) / c * banach_kac_functional(reg, f);

    // Occupation-formula side on the raw path: sqrt(Y) \int_I f(B(t)) dt.
    const TimeGrid& grid = path.grid;
    double time_integral = 0.0;
    for (int c_idx = 0; c_idx < grid.n; ++c_idx) {
        const double w = (c_idx == 0 || c_idx == grid.n - 1) ? 0.5 : 1.0;
        time_integral += w * f(path.values[grid.core_begin() + c_idx]);
    }
    time_integral *= grid.delta;
    return {scaled, std::sqrt(path.mixing->value) * time_integral};
}

} // namespace gbm
