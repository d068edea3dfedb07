#include "gbm/regularize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gbm {

namespace {

// Exact integration and evaluation of the piecewise-linear interpolant of
// grid values.
class PathInterpolant {
public:
    PathInterpolant(const SamplePath& path) : path_(path), prefix_(path.values.size()) {
        prefix_[0] = 0.0;
        const double d = path.grid.delta;
        for (std::size_t i = 0; i + 1 < path_.values.size(); ++i)
            prefix_[i + 1] = prefix_[i] + 0.5 * d * (path_.values[i] + path_.values[i + 1]);
    }

    // Continuous grid index; tolerates sub-ulp excursions past the ends
    // (they arise when the requested ext is not exactly representable).
    double position(double t) const {
        const double last = static_cast<double>(path_.values.size()) - 1.0;
        const double p = (t + path_.grid.ext) / path_.grid.delta;
        if (p < -1e-6 || p > last + 1e-6)
            throw std::invalid_argument("PathInterpolant: time out of range");
        return std::clamp(p, 0.0, last);
    }

    double value_at(double t) const {
        const double p = position(t);
        const long i = static_cast<long>(std::floor(p));
        const long last = static_cast<long>(path_.values.size()) - 1;
        if (i >= last) return path_.values[last];
        const double w = p - i;
        return path_.values[i] + w * (path_.values[i + 1] - path_.values[i]);
    }

    // \int_{t0}^{a} B for the interpolant, a inside the grid.
    double antiderivative(double a) const {
        const double p = position(a);
        const long i = static_cast<long>(std::floor(p));
        const long last = static_cast<long>(path_.values.size()) - 1;
        if (i >= last) return prefix_[last];
        const double frac = (p - i) * path_.grid.delta;
        return prefix_[i] + 0.5 * frac * (path_.values[i] + value_at(a));
    }

    double integral(double a, double b) const { return antiderivative(b) - antiderivative(a); }

    double prefix(std::size_t i) const { return prefix_[i]; }

private:
    const SamplePath& path_;
    std::vector<double> prefix_;
};

} // namespace

RegularizedPath regularize_path(const SamplePath& path, const Kernel& kernel, double epsilon) {
    const TimeGrid& grid = path.grid;
    if (!(epsilon > 0.0) || epsilon > grid.ext + 1e-12 * grid.delta)
        throw std::invalid_argument(
            "regularize_path: epsilon must lie in (0, ext]; extend the grid margin");
    const double steps = epsilon / grid.delta;
    const int k = static_cast<int>(std::lround(steps));
    if (k < 1 || std::abs(steps - k) > 1e-9 * steps)
        throw std::invalid_argument(
            "regularize_path: epsilon must be an integer multiple of the grid spacing");
    if (k > grid.ext_steps)
        throw std::invalid_argument("regularize_path: epsilon exceeds the extension margin");

    RegularizedPath reg{path, kernel, epsilon, std::vector<double>(grid.n),
                        std::vector<double>(grid.n)};
    const PathInterpolant interp(path);
    const double eps = static_cast<double>(k) * grid.delta; // exact multiple

    if (kernel.is_rectangular()) {
        for (int c = 0; c < grid.n; ++c) {
            const int i = grid.core_begin() + c;
            reg.values[c] = (interp.prefix(i + k) - interp.prefix(i - k)) / (2.0 * eps);
            reg.derivative[c] = (path.values[i + k] - path.values[i - k]) / (2.0 * eps);
        }
        return reg;
    }

    const bool has_density = kernel.pl_x.size() >= 2;
    for (int c = 0; c < grid.n; ++c) {
        const int i = grid.core_begin() + c;
        const double t = grid.time(i);

        double value = 0.0;
        double deriv = 0.0;

        // Atom contributions are exact for the interpolant:
        //   value += jump/eps * \int_{t-eps}^{t-eps*loc} B
        //   deriv += jump/eps * B(t - eps*loc)
        for (const auto& a : kernel.atoms) {
            value += a.jump / eps * interp.integral(t - eps, t - eps * a.location);
            deriv += a.jump / eps * interp.value_at(t - eps * a.location);
        }

        if (has_density) {
            // Trapezoid rule on the eps-grid u_j = j/k, where B(t - eps*u_j)
            // lands exactly on grid points. The d(psi) density is piecewise
            // constant with jumps at breakpoints, so it is sampled at segment
            // midpoints (node sampling would halve the support endpoints).
            double vsum = 0.0, dsum = 0.0;
            for (int j = -k; j <= k; ++j) {
                const double u = static_cast<double>(j) / k;
                const double w = (j == -k || j == k) ? 0.5 : 1.0;
                vsum += w * kernel.continuous_part(u) * path.values[i - j];
            }
            for (int j = -k; j < k; ++j) {
                const double u_mid = (static_cast<double>(j) + 0.5) / k;
                dsum += kernel.density(u_mid) * 0.5 * (path.values[i - j] + path.values[i - j - 1]);
            }
            value += vsum / k;
            deriv += dsum / (k * eps);
        }

        reg.values[c] = value;
        reg.derivative[c] = deriv;
    }
    return reg;
}

std::vector<double> z_tilde(const RegularizedPath& reg, double alpha) {
    if (reg.derivative.empty())
        throw std::invalid_argument("z_tilde: derivative not populated");
    const double scale = std::pow(reg.epsilon, 1.0 - 0.5 * alpha);
    std::vector<double> z(reg.derivative.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = scale * reg.derivative[i];
    return z;
}

} // namespace gbm
