#ifndef GBM_STATS_HPP
#define GBM_STATS_HPP

// Increment statistics and convergence experiments: normalized increment
// laws, their time-empirical occupation distributions, L^p moduli, squared
// increment moduli, odd-moment decay, discrete power variation, and the
// diffusive-limit constant for odd powers of the normalized increments.

#include <cstdint>
#include <functional>
#include <vector>

#include "gbm/paths.hpp"
#include "gbm/specfun.hpp"

namespace gbm {

// Empirical law of a scalar sample: CDF, moments and Kolmogorov-Smirnov
// distances.
class EmpiricalLaw {
public:
    explicit EmpiricalLaw(std::vector<double> samples);

    std::size_t size() const { return sorted_.size(); }
    const std::vector<double>& sorted() const { return sorted_; }

    double cdf(double x) const;
    double moment(int k) const;
    double mean() const;
    double variance() const;
    double skewness() const;
    double excess_kurtosis() const;

    // sup-distance against a reference CDF; sample points inside the open
    // interval (exclude_lo, exclude_hi) are skipped when exclude_lo <
    // exclude_hi (used for statements that hold away from a point).
    double ks_distance(const std::function<double(double)>& ref_cdf, double exclude_lo = 1.0,
                       double exclude_hi = -1.0) const;

    static double ks_two_sample(const EmpiricalLaw& a, const EmpiricalLaw& b);

    // Asymptotic critical values with Stephens' finite-sample correction,
    // significance in {0.10, 0.05, 0.01}.
    static double ks_critical_one_sample(std::size_t n, double significance = 0.01);
    static double ks_critical_two_sample(std::size_t n, std::size_t m,
                                         double significance = 0.01);

private:
    std::vector<double> sorted_;
};

// Centered Gaussian CDF with the given variance.
double gaussian_cdf(double x, double variance = 1.0);
// k-th absolute moment of the standard normal: 2^{k/2} Gamma((k+1)/2)/sqrt(pi).
double normal_abs_moment(double p);
// k-th moment of the standard normal ((k-1)!! for even k, 0 for odd).
double normal_moment(int k);

// Z(t) = eps^{-alpha/2} (B(t+eps) - B(t)) on the core grid; eps must be a
// multiple of the spacing and t+eps must stay inside the extended grid.
std::vector<double> z_increments(const SamplePath& path, double epsilon);

// Trapezoid integral \int_0^t g(s) ds of a core-grid sequence.
double trapezoid_integral(const std::vector<double>& values, double delta, double t_upper);

// --- Ensemble experiments (one replica = one path, RngStream(seed, replica)) ---

struct EpsReplicaTable {
    std::vector<double> ladder;                // epsilon values
    std::vector<std::vector<double>> value;    // [eps][replica]
    std::vector<std::vector<double>> target;   // [eps][replica]
    std::vector<double> mixing_y;              // [replica]
};

// \int_0^t Z^k ds against t Y^{k/2} m_k(N), plus the ensemble RMS gap per
// epsilon and the fitted exponent of RMS vs epsilon (the mean-square rate).
struct MomentConvergenceResult {
    EpsReplicaTable table;
    std::vector<double> rms_gap;  // per epsilon
    double fitted_exponent = 0.0; // slope of log rms_gap vs log eps
};
MomentConvergenceResult moment_convergence_experiment(const GreyParams& params, int k,
                                                      double t_upper,
                                                      const std::vector<double>& ladder,
                                                      const TimeGrid& grid, int replicas,
                                                      std::uint64_t seed, int workers = 1);

// \int_0^t |Z|^p ds against t Y^{p/2} E|N|^p.
EpsReplicaTable lp_moduli_experiment(const GreyParams& params, double p, double t_upper,
                                     const std::vector<double>& ladder, const TimeGrid& grid,
                                     int replicas, std::uint64_t seed, int workers = 1);

// \int_0^t eps^{-alpha/2} |B^2(s+eps) - B^2(s)|^p ds against
// 2^p Y^{p/2} E|N|^p \int_0^t |B(s)|^p ds, assembled exactly as displayed.
EpsReplicaTable squared_moduli_experiment(const GreyParams& params, double p, double t_upper,
                                          const std::vector<double>& ladder, const TimeGrid& grid,
                                          int replicas, std::uint64_t seed, int workers = 1);

// \int_0^t eps^{-alpha/2} (B^2(s+eps) - B^2(s))^k ds for odd k; target 0.
EpsReplicaTable odd_squared_moment_experiment(const GreyParams& params, int k, double t_upper,
                                              const std::vector<double>& ladder,
                                              const TimeGrid& grid, int replicas,
                                              std::uint64_t seed, int workers = 1);

// --- Discrete power variation ---

enum class PvScaling { sqrt_n, n_one_minus_alpha, n_neg_alpha_half };

struct PowerVariationResult {
    int k = 0;
    int n = 0;
    double value = 0.0;
    PvScaling scaling = PvScaling::sqrt_n;
    bool centered = false;
    double mixing_y = 1.0;
};

// Scaled sums of k-th powers of the increments of a path sampled exactly at
// {m/n} in [0,1]. When `centered`, each term is reduced by m_k(N) Y^{k/2}
// using the path's recorded mixing variable.
PowerVariationResult power_variation(const SamplePath& path, int k, PvScaling scaling,
                                     bool centered);

// Coefficients a_{k,m} of x^k = sum_m a_{k,m} H_m(x) in probabilists'
// Hermite polynomials; entry m of the returned vector (zero for m with
// parity different from k). a_{k,m} = k! / (m! 2^j j!), j = (k-m)/2.
std::vector<double> hermite_x_power_coefficients(int k);

// Asymptotic variance constant of (1/sqrt(eps)) \int_0^t Z^k ds for odd k
// and alpha in (0,1):
//   c_{k,alpha} = sum_{m odd <= k} a_{k,m}^2 m! \int_R rho(x)^m dx,
//   rho(x) = ((x+1)^alpha + |x-1|^alpha - 2|x|^alpha)/2,
// the correlation of normalized increments at lag x. The bracket is the
// displayed integrand extended continuously at x = 1; per-term weights are
// the Hermite chaos weights a^2 m! (see the decisions ledger). The m = 1
// term vanishes analytically for alpha < 1.
double c_k_alpha(int k, double alpha, const EvalConfig& cfg = {});

// Samples of the time-t marginal of (1/sqrt(eps)) \int_0^t Z^k ds across
// replicas; conditional on Y the limit is a centered Gaussian with variance
// c_{k,alpha} Y^k t.
struct BrownianLimitResult {
    std::vector<double> statistic; // per replica
    std::vector<double> mixing_y;  // per replica
    double c_value = 0.0;          // c_{k,alpha}
};
BrownianLimitResult brownian_limit_experiment(const GreyParams& params, int k, double t_upper,
                                              double epsilon, const TimeGrid& grid, int replicas,
                                              std::uint64_t seed, int workers = 1);

} // namespace gbm

#endif
