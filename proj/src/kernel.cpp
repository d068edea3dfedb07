#include "gbm/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gbm/errors.hpp"
#include "gbm/quadrature.hpp"

namespace gbm {

namespace {

double pl_value(const std::vector<double>& xs, const std::vector<double>& ys, double u) {
    if (xs.size() < 2 || u <= xs.front() || u >= xs.back()) {
        // Continuous part vanishes at and beyond its end breakpoints.
        if (xs.size() >= 2 && u == xs.front()) return ys.front();
        if (xs.size() >= 2 && u == xs.back()) return ys.back();
        return 0.0;
    }
    const auto it = std::upper_bound(xs.begin(), xs.end(), u);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double w = (u - xs[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + w * (ys[i + 1] - ys[i]);
}

} // namespace

double Kernel::psi(double u) const {
    double v = pl_value(pl_x, pl_y, u);
    for (const auto& a : atoms)
        if (a.location <= u) v += a.jump;
    return v;
}

double Kernel::continuous_part(double u) const { return pl_value(pl_x, pl_y, u); }

double Kernel::density(double u) const {
    if (pl_x.size() < 2 || u < pl_x.front() || u > pl_x.back()) return 0.0;
    auto slope = [&](std::size_t i) { return (pl_y[i + 1] - pl_y[i]) / (pl_x[i + 1] - pl_x[i]); };
    // Exactly at a breakpoint: average of adjacent slopes.
    for (std::size_t i = 0; i < pl_x.size(); ++i) {
        if (u == pl_x[i]) {
            const double left = (i == 0) ? 0.0 : slope(i - 1);
            const double right = (i + 1 == pl_x.size()) ? 0.0 : slope(i);
            return 0.5 * (left + right);
        }
    }
    const auto it = std::upper_bound(pl_x.begin(), pl_x.end(), u);
    return slope(static_cast<std::size_t>(it - pl_x.begin()) - 1);
}

double Kernel::integral() const {
    double v = 0.0;
    for (const auto& a : atoms) v += a.jump * (1.0 - a.location);
    for (std::size_t i = 0; i + 1 < pl_x.size(); ++i)
        v += 0.5 * (pl_y[i] + pl_y[i + 1]) * (pl_x[i + 1] - pl_x[i]);
    return v;
}

double Kernel::first_moment() const {
    // \int u * 1_{loc <= u <= 1} du = (1 - loc^2)/2 for the step part;
    // the linear part integrates exactly piece by piece.
    double v = 0.0;
    for (const auto& a : atoms) v += a.jump * 0.5 * (1.0 - a.location * a.location);
    for (std::size_t i = 0; i + 1 < pl_x.size(); ++i) {
        const double x0 = pl_x[i], x1 = pl_x[i + 1];
        const double y0 = pl_y[i], y1 = pl_y[i + 1];
        const double m = (y1 - y0) / (x1 - x0);
        const double b = y0 - m * x0;
        v += m * (x1 * x1 * x1 - x0 * x0 * x0) / 3.0 + b * (x1 * x1 - x0 * x0) / 2.0;
    }
    return v;
}

double Kernel::total_jump() const {
    double v = 0.0;
    for (const auto& a : atoms) v += a.jump;
    return v;
}

bool Kernel::is_rectangular(double tol) const {
    if (!purely_atomic() || atoms.size() != 2) return false;
    const auto& a = atoms[0].location < atoms[1].location ? atoms[0] : atoms[1];
    const auto& b = atoms[0].location < atoms[1].location ? atoms[1] : atoms[0];
    return std::abs(a.location + 1.0) < tol && std::abs(a.jump - 0.5) < tol &&
           std::abs(b.location - 1.0) < tol && std::abs(b.jump + 0.5) < tol;
}

void Kernel::validate() const {
    for (const auto& a : atoms)
        if (!(a.location >= -1.0 && a.location <= 1.0))
            throw std::invalid_argument("Kernel '" + name + "': atom outside [-1,1]");
    if (pl_x.size() != pl_y.size())
        throw std::invalid_argument("Kernel '" + name + "': breakpoint/value count mismatch");
    if (pl_x.size() == 1)
        throw std::invalid_argument("Kernel '" + name + "': a single pl breakpoint is meaningless");
    for (std::size_t i = 0; i + 1 < pl_x.size(); ++i)
        if (!(pl_x[i] < pl_x[i + 1]))
            throw std::invalid_argument("Kernel '" + name + "': breakpoints must increase");
    if (!pl_x.empty()) {
        if (pl_x.front() < -1.0 || pl_x.back() > 1.0)
            throw std::invalid_argument("Kernel '" + name + "': pl support outside [-1,1]");
        if (std::abs(pl_y.front()) > 1e-12 || std::abs(pl_y.back()) > 1e-12)
            throw std::invalid_argument("Kernel '" + name +
                                        "': continuous part must vanish at its end breakpoints");
    }
    if (std::abs(total_jump()) > 1e-12)
        throw std::invalid_argument("Kernel '" + name +
                                    "': atom jumps must sum to 0 (psi vanishes outside [-1,1])");
    if (std::abs(integral() - 1.0) > 1e-12)
        throw std::invalid_argument("Kernel '" + name + "': integral of psi must equal 1");
}

Kernel rectangular_kernel() {
    Kernel k;
    k.name = "rect";
    k.atoms = {{-1.0, 0.5}, {1.0, -0.5}};
    k.validate();
    return k;
}

Kernel triangular_kernel() {
    Kernel k;
    k.name = "triangle";
    k.pl_x = {-1.0, 0.0, 1.0};
    k.pl_y = {0.0, 1.0, 0.0};
    k.validate();
    return k;
}

Kernel parse_kernel(std::istream& in, const std::string& name) {
    Kernel k;
    k.name = name;
    std::vector<std::pair<double, double>> pl;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind) || kind[0] == '#') continue;
        double a, b;
        if (!(ls >> a >> b))
            throw std::invalid_argument("Kernel '" + name + "': parse error at line " +
                                        std::to_string(lineno));
        if (kind == "atom")
            k.atoms.push_back({a, b});
        else if (kind == "pl")
            pl.emplace_back(a, b);
        else
            throw std::invalid_argument("Kernel '" + name + "': unknown directive '" + kind +
                                        "' at line " + std::to_string(lineno));
    }
    std::sort(pl.begin(), pl.end());
    for (const auto& [x, y] : pl) {
        k.pl_x.push_back(x);
        k.pl_y.push_back(y);
    }
    k.validate();
    return k;
}

Kernel load_kernel(const std::string& spec) {
    if (spec == "rect" || spec == "rectangular") return rectangular_kernel();
    if (spec == "tri" || spec == "triangle" || spec == "triangular") return triangular_kernel();
    std::ifstream in(spec);
    if (!in) throw std::invalid_argument("load_kernel: cannot open kernel file '" + spec + "'");
    return parse_kernel(in, spec);
}

double c_psi(const Kernel& kernel, double alpha) {
    kernel.validate();
    if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("c_psi: alpha must lie in (0,2)");

    double stieltjes = 0.0; // \int\int |u-v|^alpha d(psi) d(psi)

    // Atom-atom part.
    for (const auto& a : kernel.atoms)
        for (const auto& b : kernel.atoms)
            stieltjes += a.jump * b.jump * std::pow(std::abs(a.location - b.location), alpha);

    const bool has_density = kernel.pl_x.size() >= 2;

    if (has_density) {
        std::vector<double> breaks(kernel.pl_x);

        // Atom-density cross terms (counted twice by symmetry).
        for (const auto& a : kernel.atoms) {
            auto f = [&](double v) {
                return kernel.density(v) * std::pow(std::abs(a.location - v), alpha);
            };
            std::vector<double> pts = breaks;
            pts.push_back(a.location); // kink of |u-v|^alpha
            pts.push_back(kernel.pl_x.front());
            std::sort(pts.begin(), pts.end());
            pts.erase(std::remove_if(pts.begin(), pts.end(),
                                     [&](double p) {
                                         return p < kernel.pl_x.front() || p > kernel.pl_x.back();
                                     }),
                      pts.end());
            pts.insert(pts.begin(), kernel.pl_x.front());
            pts.push_back(kernel.pl_x.back());
            stieltjes += 2.0 * a.jump * integrate_split(f, pts, 1e-11).value;
        }

        // Density-density part: iterated adaptive quadrature with the inner
        // integral split at the |u-v| kink.
        auto outer = [&](double u) {
            auto inner = [&](double v) {
                return kernel.density(v) * std::pow(std::abs(u - v), alpha);
            };
            std::vector<double> pts = breaks;
            pts.push_back(u);
            std::sort(pts.begin(), pts.end());
            pts.erase(std::remove_if(pts.begin(), pts.end(),
                                     [&](double p) {
                                         return p < kernel.pl_x.front() || p > kernel.pl_x.back();
                                     }),
                      pts.end());
            if (pts.size() < 2) return 0.0;
            return kernel.density(u) * integrate_split(inner, pts, 1e-12).value;
        };
        stieltjes += integrate_split(outer, breaks, 1e-10).value;
    }

    const double radicand = -0.5 * stieltjes;
    if (!(radicand > 0.0))
        throw EvaluationError("c_psi: non-positive radicand for kernel '" + kernel.name + "'");
    return std::sqrt(radicand);
}

} // namespace gbm
