#ifndef GBM_SAMPLING_HPP
#define GBM_SAMPLING_HPP

// Exact random variate generation for the process family: the one-sided
// beta-stable marginal S(1), the mixing variable Y_beta with density M_beta,
// the inverse-subordinator marginal E(x) and the D_beta(t) marginal.

#include <stdexcept>

#include "gbm/rng.hpp"

namespace gbm {

// Non-negative mixing variable with density M_beta; for beta = 1 the value
// is exactly 1.
struct MixingVariable {
    double value;
    double beta;
};

// One draw of S(1) for a beta-stable subordinator, beta in (0,1):
// E exp(-lambda S(1)) = exp(-lambda^beta). Kanter's trigonometric
// representation S = (A(pi U)/W)^{(1-beta)/beta} with U uniform, W unit
// exponential and A the Zolotarev function; exact in law, no rejection.
double sample_stable_subordinator(double beta, RngStream& rng);

// Y_beta realized as S(1)^{-beta} (so that E exp(-s Y) = E_beta(-s));
// beta = 1 returns exactly 1 without consuming randomness.
MixingVariable sample_y_beta(double beta, RngStream& rng);

// Marginal of the inverse subordinator E(x) = inf{t : S(t) > x}, x > 0,
// using the equality in law E(x) = (S(1)/x)^{-beta}.
double sample_inverse_subordinator(double beta, double x, RngStream& rng);

// Marginal with density f_{D_beta(t)}(x) = t^{-beta} M_beta(x t^{-beta});
// realized as t^beta * Y_beta.
double sample_d_beta(double beta, double t, RngStream& rng);

} // namespace gbm

#endif
