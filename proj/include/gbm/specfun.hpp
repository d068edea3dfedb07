#ifndef GBM_SPECFUN_HPP
#define GBM_SPECFUN_HPP

// Mittag-Leffler function E_beta, M-Wright density M_beta, the grey Brownian
// motion marginal density f_{alpha,beta} and the elliptical density generator
// g_beta, all evaluated with a controlled absolute accuracy target.

#include <stdexcept>

#include "gbm/errors.hpp"

namespace gbm {

struct EvalConfig {
    double abs_tol = 1e-10;     // absolute accuracy target
    double series_radius = 5.0; // switch point between power series and global algorithm
    int max_terms = 400;        // series term budget

    void validate() const {
        if (!(abs_tol > 0.0)) throw std::invalid_argument("EvalConfig: abs_tol must be > 0");
        if (!(series_radius > 0.0))
            throw std::invalid_argument("EvalConfig: series_radius must be > 0");
        if (max_terms < 1) throw std::invalid_argument("EvalConfig: max_terms must be >= 1");
    }
};

// The (alpha, beta) pair of the process; carried by every process-level
// operation. alpha in (0,2) strictly, beta in (0,1].
struct GreyParams {
    double alpha;
    double beta;

    GreyParams(double a, double b) : alpha(a), beta(b) { validate(); }

    void validate() const {
        if (!(alpha > 0.0 && alpha < 2.0))
            throw std::invalid_argument("GreyParams: alpha must lie in (0,2)");
        if (!(beta > 0.0 && beta <= 1.0))
            throw std::invalid_argument("GreyParams: beta must lie in (0,1]");
    }

    double hurst() const { return 0.5 * alpha; }
};

// E_beta(x) = sum_n x^n / Gamma(beta*n + 1), beta in (0,1], x real.
// Power series inside the cancellation-safe region; the completely monotone
// branch for negative arguments uses the spectral representation
//   E_beta(-x) = sin(beta*pi)/(beta*pi) *
//                \int_0^inf exp(-(x s)^{1/beta}) / (s^2 + 2 s cos(beta*pi) + 1) ds,
// and the exponential asymptotic expansion
//   E_beta(x) = exp(x^{1/beta})/beta - sum_k x^{-k}/Gamma(1 - beta k)
// covers large positive arguments (falling back to the positive-term series
// when its optimal truncation cannot meet the accuracy target).
double mittag_leffler(double beta, double x, const EvalConfig& cfg = {});

// M-Wright density M_beta(tau), beta in (0,1), tau >= 0, with Laplace
// transform \int_0^inf e^{-s tau} M_beta(tau) dtau = E_beta(-s).
// Series representation (standard for the M-Wright function):
//   M_beta(z) = sum_{n>=0} (-z)^n / (n! Gamma(-beta n + 1 - beta))
// with 1/Gamma at non-positive arguments obtained from the reflection
// formula, i.e. terms (1/pi) (-z)^n/n! Gamma(beta(n+1)) sin(pi beta (n+1)).
// Beyond the cancellation-safe range of the series the evaluation switches
// to the non-oscillatory integral
//   M_beta(tau) = tau^{beta/(1-beta)}/(1-beta) *
//                 (1/pi) \int_0^pi A(phi) exp(-tau^{1/(1-beta)} A(phi)) dphi
// with A the Zolotarev function A(phi) =
//   sin(beta phi)^{beta/(1-beta)} sin((1-beta) phi) / sin(phi)^{1/(1-beta)}.
// beta = 1 (point mass at tau = 1) is rejected here.
double m_wright_density(double beta, double tau, const EvalConfig& cfg = {});

// Largest tau up to which the pure series meets cfg.abs_tol for this beta;
// beyond it the integral branch takes over.
double m_wright_series_tau_limit(double beta, const EvalConfig& cfg = {});

// One-dimensional marginal density of the process at time t:
//   f_{alpha,beta}(x,t) = t^{-alpha/2}/sqrt(2) * M_{beta/2}(sqrt(2)|x| t^{-alpha/2}).
double marginal_density(const GreyParams& params, double x, double t,
                        const EvalConfig& cfg = {});

// Elliptical density generator
//   g_beta(x) = (2 pi)^{-n/2} \int_0^inf tau^{-n/2} e^{-x/tau} M_beta(tau) dtau,
// x >= 0, n >= 1. For beta = 1 the mixing density degenerates to a point
// mass at 1 and g reduces to (2 pi)^{-n/2} e^{-x}.
double density_generator(double beta, int n, double x, const EvalConfig& cfg = {});

} // namespace gbm

#endif
