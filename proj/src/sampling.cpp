#include "gbm/sampling.hpp"

#include <cmath>
#include <numbers>

namespace gbm {

namespace {

// log A(phi) with A the Zolotarev function, phi in (0, pi).
double log_zolotarev_a(double beta, double phi) {
    return (beta * std::log(std::sin(beta * phi)) +
            (1.0 - beta) * std::log(std::sin((1.0 - beta) * phi)) - std::log(std::sin(phi))) /
           (1.0 - beta);
}

} // namespace

double sample_stable_subordinator(double beta, RngStream& rng) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("sample_stable_subordinator: beta must lie in (0,1)");
    const double phi = std::numbers::pi * rng.uniform_open();
    const double w = rng.exponential();
    const double log_s = (1.0 - beta) / beta * (log_zolotarev_a(beta, phi) - std::log(w));
    return std::exp(log_s);
}

MixingVariable sample_y_beta(double beta, RngStream& rng) {
    if (!(beta > 0.0 && beta <= 1.0))
        throw std::invalid_argument("sample_y_beta: beta must lie in (0,1]");
    if (beta == 1.0) return {1.0, beta};
    // Y = S(1)^{-beta}; computed in log space from the same Kanter draw.
    const double phi = std::numbers::pi * rng.uniform_open();
    const double w = rng.exponential();
    const double log_y = -(1.0 - beta) * (log_zolotarev_a(beta, phi) - std::log(w));
    return {std::exp(log_y), beta};
}

double sample_inverse_subordinator(double beta, double x, RngStream& rng) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("sample_inverse_subordinator: beta must lie in (0,1)");
    if (!(x > 0.0)) throw std::invalid_argument("sample_inverse_subordinator: x must be > 0");
    const double s = sample_stable_subordinator(beta, rng);
    return std::pow(s / x, -beta);
}

double sample_d_beta(double beta, double t, RngStream& rng) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("sample_d_beta: beta must lie in (0,1)");
    if (!(t > 0.0)) throw std::invalid_argument("sample_d_beta: t must be > 0");
    return std::pow(t, beta) * sample_y_beta(beta, rng).value;
}

} // namespace gbm
