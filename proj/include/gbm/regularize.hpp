#ifndef GBM_REGULARIZE_HPP
#define GBM_REGULARIZE_HPP

// Convolution regularization B^eps = psi_eps * B of a sample path, with
// psi_eps(t) = psi(t/eps)/eps, its derivative process, and the normalized
// derivative eps^{1-alpha/2} d/dt B^eps.

#include <vector>

#include "gbm/kernel.hpp"
#include "gbm/paths.hpp"

namespace gbm {

struct RegularizedPath {
    SamplePath base;              // the regularized input path
    Kernel kernel;
    double epsilon;
    std::vector<double> values;     // B^eps on the core grid (n entries)
    std::vector<double> derivative; // d/dt B^eps on the core grid
};

// Requirements: eps in (0, grid.ext], eps an integer multiple of the grid
// spacing. The path is treated as its piecewise-linear interpolant, so the
// atom contributions (window integrals for the values, point evaluations
// for the derivative) are exact; the continuous kernel part uses the
// trapezoid rule on the eps-grid. The rectangular kernel takes the closed
// form B^eps(t) = (1/2eps) \int_{t-eps}^{t+eps} B with derivative
// (B(t+eps) - B(t-eps)) / (2 eps).
RegularizedPath regularize_path(const SamplePath& path, const Kernel& kernel, double epsilon);

// eps^{1 - alpha/2} * derivative, pointwise on the core grid.
std::vector<double> z_tilde(const RegularizedPath& reg, double alpha);

} // namespace gbm

#endif
