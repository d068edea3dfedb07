#include "gbm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gbm/errors.hpp"
#include "gbm/quadrature.hpp"
#include "parallel.hpp"

namespace gbm {

EmpiricalLaw::EmpiricalLaw(std::vector<double> samples) : sorted_(std::move(samples)) {
    if (sorted_.empty()) throw std::invalid_argument("EmpiricalLaw: sample must be non-empty");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalLaw::cdf(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalLaw::moment(int k) const {
    double s = 0.0;
    for (double v : sorted_) s += std::pow(v, k);
    return s / static_cast<double>(sorted_.size());
}

double EmpiricalLaw::mean() const {
    double s = 0.0;
    for (double v : sorted_) s += v;
    return s / static_cast<double>(sorted_.size());
}

double EmpiricalLaw::variance() const {
    const double m = mean();
    double s = 0.0;
    for (double v : sorted_) s += (v - m) * (v - m);
    return s / static_cast<double>(sorted_.size());
}

double EmpiricalLaw::skewness() const {
    const double m = mean();
    const double sd = std::sqrt(variance());
    double s = 0.0;
    for (double v : sorted_) s += std::pow((v - m) / sd, 3);
    return s / static_cast<double>(sorted_.size());
}

double EmpiricalLaw::excess_kurtosis() const {
    const double m = mean();
    const double var = variance();
    double s = 0.0;
    for (double v : sorted_) {
        const double d = (v - m) * (v - m);
        s += d * d;
    }
    return s / (static_cast<double>(sorted_.size()) * var * var) - 3.0;
}

double EmpiricalLaw::ks_distance(const std::function<double(double)>& ref_cdf, double exclude_lo,
                                 double exclude_hi) const {
    const double n = static_cast<double>(sorted_.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_.size(); ++i) {
        const double x = sorted_[i];
        if (exclude_lo < exclude_hi && x > exclude_lo && x < exclude_hi) continue;
        const double fr = ref_cdf(x);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - fr));
        d = std::max(d, std::abs(fr - static_cast<double>(i) / n));
    }
    return d;
}

double EmpiricalLaw::ks_two_sample(const EmpiricalLaw& a, const EmpiricalLaw& b) {
    const auto& xs = a.sorted_;
    const auto& ys = b.sorted_;
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < xs.size() && j < ys.size()) {
        // Advance both samples past the current value so ties are compared
        // only after all duplicates are consumed.
        const double x = std::min(xs[i], ys[j]);
        while (i < xs.size() && xs[i] <= x) ++i;
        while (j < ys.size() && ys[j] <= x) ++j;
        const double fa = static_cast<double>(i) / static_cast<double>(xs.size());
        const double fb = static_cast<double>(j) / static_cast<double>(ys.size());
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

namespace {

double ks_asymptotic_coefficient(double significance) {
    // c(alpha) = sqrt(-log(alpha/2)/2)
    if (!(significance > 0.0 && significance < 1.0))
        throw std::invalid_argument("ks critical value: significance must lie in (0,1)");
    return std::sqrt(-0.5 * std::log(0.5 * significance));
}

} // namespace

double EmpiricalLaw::ks_critical_one_sample(std::size_t n, double significance) {
    // Stephens' finite-sample correction to the asymptotic distribution.
    const double rn = std::sqrt(static_cast<double>(n));
    return ks_asymptotic_coefficient(significance) / (rn + 0.12 + 0.11 / rn);
}

double EmpiricalLaw::ks_critical_two_sample(std::size_t n, std::size_t m, double significance) {
    const double en = static_cast<double>(n) * static_cast<double>(m) /
                      static_cast<double>(n + m);
    const double rn = std::sqrt(en);
    return ks_asymptotic_coefficient(significance) / (rn + 0.12 + 0.11 / rn);
}

double gaussian_cdf(double x, double variance) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance));
}

double normal_abs_moment(double p) {
    return std::pow(2.0, 0.5 * p) * std::tgamma(0.5 * (p + 1.0)) / std::sqrt(std::numbers::pi);
}

double normal_moment(int k) {
    if (k < 0) throw std::invalid_argument("normal_moment: k must be >= 0");
    if (k % 2 == 1) return 0.0;
    double m = 1.0;
    for (int j = k - 1; j > 1; j -= 2) m *= j;
    return m;
}

namespace {

int eps_steps(const TimeGrid& grid, double epsilon) {
    const double steps = epsilon / grid.delta;
    const int k = static_cast<int>(std::lround(steps));
    if (k < 1 || std::abs(steps - k) > 1e-9 * steps)
        throw std::invalid_argument("epsilon must be a positive integer multiple of the spacing");
    return k;
}

} // namespace

std::vector<double> z_increments(const SamplePath& path, double epsilon) {
    const TimeGrid& grid = path.grid;
    const int k = eps_steps(grid, epsilon);
    if (grid.core_end() - 1 + k >= grid.total_points())
        throw std::invalid_argument("z_increments: t + epsilon leaves the extended grid");
    const double scale = std::pow(epsilon, -0.5 * path.params.alpha);
    std::vector<double> z(grid.n);
    for (int c = 0; c < grid.n; ++c) {
        const int i = grid.core_begin() + c;
        z[c] = scale * (path.values[i + k] - path.values[i]);
    }
    return z;
}

double trapezoid_integral(const std::vector<double>& values, double delta, double t_upper) {
    const double steps = t_upper / delta;
    const int m = static_cast<int>(std::lround(steps));
    if (m < 1 || m >= static_cast<int>(values.size()) || std::abs(steps - m) > 1e-9 * steps)
        throw std::invalid_argument("trapezoid_integral: t_upper must be a grid multiple in range");
    double s = 0.5 * (values[0] + values[m]);
    for (int i = 1; i < m; ++i) s += values[i];
    return s * delta;
}

namespace {

// Shared scaffolding for the per-replica, per-epsilon experiment tables.
template <class PerReplica>
EpsReplicaTable run_eps_replica(const GreyParams& params, const std::vector<double>& ladder,
                                const TimeGrid& grid, int replicas, std::uint64_t seed,
                                int workers, const PerReplica& body) {
    if (replicas < 1) throw std::invalid_argument("experiment: replicas must be >= 1");
    if (ladder.empty()) throw std::invalid_argument("experiment: epsilon ladder is empty");
    for (double e : ladder) (void)eps_steps(grid, e);

    EpsReplicaTable table;
    table.ladder = ladder;
    table.value.assign(ladder.size(), std::vector<double>(replicas, 0.0));
    table.target.assign(ladder.size(), std::vector<double>(replicas, 0.0));
    table.mixing_y.assign(replicas, 1.0);

    const FbmGenerator fbm(params.hurst(), grid);
    detail::parallel_for(replicas, workers, [&](int r) {
        RngStream rng(seed, static_cast<std::uint64_t>(r));
        SamplePath path = generate_gbm(params, fbm, rng);
        table.mixing_y[r] = path.mixing->value;
        for (std::size_t e = 0; e < ladder.size(); ++e) {
            auto [value, target] = body(path, ladder[e]);
            table.value[e][r] = value;
            table.target[e][r] = target;
        }
    });
    return table;
}

} // namespace

MomentConvergenceResult moment_convergence_experiment(const GreyParams& params, int k,
                                                      double t_upper,
                                                      const std::vector<double>& ladder,
                                                      const TimeGrid& grid, int replicas,
                                                      std::uint64_t seed, int workers) {
    if (k < 1) throw std::invalid_argument("moment_convergence_experiment: k must be >= 1");
    const double mk = normal_moment(k);

    MomentConvergenceResult out;
    out.table = run_eps_replica(
        params, ladder, grid, replicas, seed, workers,
        [&](const SamplePath& path, double eps) -> std::pair<double, double> {
            std::vector<double> z = z_increments(path, eps);
            for (double& v : z) v = std::pow(v, k);
            const double value = trapezoid_integral(z, grid.delta, t_upper);
            const double target = t_upper * std::pow(path.mixing->value, 0.5 * k) * mk;
            return {value, target};
        });

    out.rms_gap.resize(ladder.size());
    for (std::size_t e = 0; e < ladder.size(); ++e) {
        double s = 0.0;
        for (int r = 0; r < replicas; ++r) {
            const double gap = out.table.value[e][r] - out.table.target[e][r];
            s += gap * gap;
        }
        out.rms_gap[e] = std::sqrt(s / replicas);
    }

    // Least-squares slope of log rms vs log eps.
    const std::size_t m = ladder.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t e = 0; e < m; ++e) {
        const double x = std::log(ladder[e]);
        const double y = std::log(std::max(out.rms_gap[e], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    out.fitted_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return out;
}

EpsReplicaTable lp_moduli_experiment(const GreyParams& params, double p, double t_upper,
                                     const std::vector<double>& ladder, const TimeGrid& grid,
                                     int replicas, std::uint64_t seed, int workers) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_moduli_experiment: p must be >= 1");
    const double enp = normal_abs_moment(p);
    return run_eps_replica(params, ladder, grid, replicas, seed, workers,
                           [&](const SamplePath& path, double eps) -> std::pair<double, double> {
                               std::vector<double> z = z_increments(path, eps);
                               for (double& v : z) v = std::pow(std::abs(v), p);
                               const double value = trapezoid_integral(z, grid.delta, t_upper);
                               const double target =
                                   t_upper * std::pow(path.mixing->value, 0.5 * p) * enp;
                               return {value, target};
                           });
}

namespace {

// B^2(s+eps) - B^2(s) on the core grid (unscaled; the single eps^{-alpha/2}
// factor of the displayed statistics sits outside the k-th power and is
// applied to the integral).
std::vector<double> square_increments(const SamplePath& path, double eps) {
    const TimeGrid& grid = path.grid;
    const int k = eps_steps(grid, eps);
    if (grid.core_end() - 1 + k >= grid.total_points())
        throw std::invalid_argument("squared increments: t + epsilon leaves the extended grid");
    std::vector<double> out(grid.n);
    for (int c = 0; c < grid.n; ++c) {
        const int i = grid.core_begin() + c;
        const double b0 = path.values[i];
        const double b1 = path.values[i + k];
        out[c] = b1 * b1 - b0 * b0;
    }
    return out;
}

} // namespace

EpsReplicaTable squared_moduli_experiment(const GreyParams& params, double p, double t_upper,
                                          const std::vector<double>& ladder, const TimeGrid& grid,
                                          int replicas, std::uint64_t seed, int workers) {
    if (!(p >= 1.0)) throw std::invalid_argument("squared_moduli_experiment: p must be >= 1");
    const double enp = normal_abs_moment(p);
    return run_eps_replica(
        params, ladder, grid, replicas, seed, workers,
        [&](const SamplePath& path, double eps) -> std::pair<double, double> {
            std::vector<double> q = square_increments(path, eps);
            for (double& v : q) v = std::pow(std::abs(v), p);
            const double value = std::pow(eps, -0.5 * params.alpha) *
                                 trapezoid_integral(q, grid.delta, t_upper);

            std::vector<double> absb(grid.n);
            for (int c = 0; c < grid.n; ++c)
                absb[c] = std::pow(std::abs(path.values[grid.core_begin() + c]), p);
            const double target = std::pow(2.0, p) * std::pow(path.mixing->value, 0.5 * p) * enp *
                                  trapezoid_integral(absb, grid.delta, t_upper);
            return {value, target};
        });
}

EpsReplicaTable odd_squared_moment_experiment(const GreyParams& params, int k, double t_upper,
                                              const std::vector<double>& ladder,
                                              const TimeGrid& grid, int replicas,
                                              std::uint64_t seed, int workers) {
    if (k < 1 || k % 2 == 0)
        throw std::invalid_argument("odd_squared_moment_experiment: k must be odd");
    return run_eps_replica(params, ladder, grid, replicas, seed, workers,
                           [&](const SamplePath& path, double eps) -> std::pair<double, double> {
                               std::vector<double> q = square_increments(path, eps);
                               for (double& v : q) v = std::pow(v, k);
                               const double value = std::pow(eps, -0.5 * params.alpha) *
                                                    trapezoid_integral(q, grid.delta, t_upper);
                               return {value, 0.0};
                           });
}

PowerVariationResult power_variation(const SamplePath& path, int k, PvScaling scaling,
                                     bool centered) {
    const TimeGrid& grid = path.grid;
    if (k < 1) throw std::invalid_argument("power_variation: k must be >= 1");
    if (std::abs(grid.horizon - 1.0) > 1e-12)
        throw std::invalid_argument("power_variation: path must be sampled on {m/n} in [0,1]");

    const int n = grid.n - 1; // increment count
    const double alpha = path.params.alpha;
    const double y = path.mixing ? path.mixing->value : 1.0;
    const double mk = normal_moment(k);
    const double inc_scale = std::pow(static_cast<double>(n), 0.5 * k * alpha);
    const double center = centered ? mk * std::pow(y, 0.5 * k) : 0.0;

    double sum = 0.0;
    for (int m = 0; m < n; ++m) {
        const int i = grid.core_begin() + m;
        const double d = path.values[i + 1] - path.values[i];
        sum += inc_scale * std::pow(d, k) - center;
    }

    double pre = 1.0;
    switch (scaling) {
        case PvScaling::sqrt_n: pre = 1.0 / std::sqrt(static_cast<double>(n)); break;
        case PvScaling::n_one_minus_alpha: pre = std::pow(static_cast<double>(n), 1.0 - alpha); break;
        case PvScaling::n_neg_alpha_half: pre = std::pow(static_cast<double>(n), -0.5 * alpha); break;
    }
    return {k, n, pre * sum, scaling, centered, y};
}

std::vector<double> hermite_x_power_coefficients(int k) {
    if (k < 0) throw std::invalid_argument("hermite_x_power_coefficients: k must be >= 0");
    std::vector<double> a(static_cast<std::size_t>(k) + 1, 0.0);
    for (int m = k; m >= 0; m -= 2) {
        const int j = (k - m) / 2;
        a[m] = std::tgamma(k + 1.0) /
               (std::tgamma(m + 1.0) * std::pow(2.0, j) * std::tgamma(j + 1.0));
    }
    return a;
}

double c_k_alpha(int k, double alpha, const EvalConfig& cfg) {
    cfg.validate();
    if (k < 3 || k % 2 == 0) throw std::invalid_argument("c_k_alpha: k must be odd and >= 3");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("c_k_alpha: alpha must lie in (0,1); the lag integral "
                                    "diverges for alpha >= 1");

    // rho(x): correlation of normalized increments at lag x (x >= 0),
    // extended continuously through x = 1 by |x-1|^alpha. For large lags the
    // direct difference cancels catastrophically; the even binomial
    // expansion x^alpha (C2 h^2 + C4 h^4 + C6 h^6), h = 1/x, is exact to
    // machine precision once h <= 1e-2.
    const double c2 = 0.5 * alpha * (alpha - 1.0);
    const double c4 = c2 * (alpha - 2.0) * (alpha - 3.0) / 12.0;
    const double c6 = c4 * (alpha - 4.0) * (alpha - 5.0) / 30.0;
    auto rho = [=](double x) {
        if (x > 100.0) {
            const double h2 = 1.0 / (x * x);
            return std::pow(x, alpha) * h2 * (c2 + h2 * (c4 + h2 * c6));
        }
        return 0.5 * (std::pow(x + 1.0, alpha) + std::pow(std::abs(x - 1.0), alpha) -
                      2.0 * std::pow(x, alpha));
    };

    const std::vector<double> a = hermite_x_power_coefficients(k);
    double c = 0.0;
    for (int m = 1; m <= k; m += 2) {
        if (a[m] == 0.0) continue;
        auto rho_m = [&](double x) { return std::pow(rho(x), m); };
        QuadResult head = integrate_split(rho_m, {0.0, 1.0, 2.0}, 1e-11);
        // Tail: rho^m decays like ((alpha(alpha-1)/2) x^{alpha-2})^m, too
        // slowly for the u/(1-u) map when m = 1. The inverse-power map
        // x = 2 v^{-p} with p = 2/((2-alpha)m - 1) turns the tail into an
        // integrand vanishing linearly at v = 0.
        const double p = 2.0 / ((2.0 - alpha) * m - 1.0);
        auto mapped_tail = [&](double v) {
            const double x = 2.0 * std::pow(v, -p);
            return rho_m(x) * 2.0 * p * std::pow(v, -p - 1.0);
        };
        QuadResult tail = integrate(mapped_tail, 0.0, 1.0, 1e-11);
        if (!head.converged || !tail.converged)
            throw EvaluationError("c_k_alpha: lag integral did not converge (m = " +
                                  std::to_string(m) + ")");
        const double lag_integral = 2.0 * (head.value + tail.value); // over the whole line
        c += a[m] * a[m] * std::tgamma(m + 1.0) * lag_integral;
    }
    if (!(c > 0.0)) throw EvaluationError("c_k_alpha: non-positive constant");
    return c;
}

BrownianLimitResult brownian_limit_experiment(const GreyParams& params, int k, double t_upper,
                                              double epsilon, const TimeGrid& grid, int replicas,
                                              std::uint64_t seed, int workers) {
    if (replicas < 1) throw std::invalid_argument("brownian_limit_experiment: replicas >= 1");
    BrownianLimitResult out;
    out.statistic.assign(replicas, 0.0);
    out.mixing_y.assign(replicas, 1.0);
    out.c_value = c_k_alpha(k, params.alpha);

    const FbmGenerator fbm(params.hurst(), grid);
    const double scale = 1.0 / std::sqrt(epsilon);
    detail::parallel_for(replicas, workers, [&](int r) {
        RngStream rng(seed, static_cast<std::uint64_t>(r));
        SamplePath path = generate_gbm(params, fbm, rng);
        out.mixing_y[r] = path.mixing->value;
        if (t_upper == 0.0) {
            out.statistic[r] = 0.0;
            return;
        }
        std::vector<double> z = z_increments(path, epsilon);
        for (double& v : z) v = std::pow(v, k);
        out.statistic[r] = scale * trapezoid_integral(z, grid.delta, t_upper);
    });
    return out;
}

} // namespace gbm
