#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "gbm/kernel.hpp"
#include "gbm/paths.hpp"
#include "gbm/regularize.hpp"
#include "gbm/rng.hpp"

using namespace gbm;

namespace {

// Closed form for the triangular kernel: C^2 = (2^{alpha+2} - 4)/((alpha+1)(alpha+2)),
// from the piecewise-linear autocorrelation of the slope.
double c_triangle_closed_form(double alpha) {
    return std::sqrt((std::pow(2.0, alpha + 2.0) - 4.0) / ((alpha + 1.0) * (alpha + 2.0)));
}

// Brute-force double Stieltjes integral for density-only kernels on a fine
// midpoint lattice (independent of the adaptive machinery in c_psi).
double c_density_bruteforce(const Kernel& k, double alpha, int n = 3000) {
    const double h = 2.0 / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = -1.0 + (i + 0.5) * h;
        const double ru = k.density(u);
        if (ru == 0.0) continue;
        for (int j = 0; j < n; ++j) {
            const double v = -1.0 + (j + 0.5) * h;
            s += ru * k.density(v) * std::pow(std::abs(u - v), alpha);
        }
    }
    return std::sqrt(-0.5 * s * h * h);
}

SamplePath make_deterministic_path(const TimeGrid& grid,
                                   const std::function<double(double)>& f) {
    SamplePath p{grid, std::vector<double>(grid.total_points()), ProcessTag::gbm,
                 GreyParams(1.0, 1.0), MixingVariable{1.0, 1.0}};
    for (int i = 0; i < grid.total_points(); ++i) p.values[i] = f(grid.time(i));
    return p;
}

} // namespace

TEST_CASE("kernel validation") {
    CHECK_NOTHROW(rectangular_kernel().validate());
    CHECK_NOTHROW(triangular_kernel().validate());
    CHECK(rectangular_kernel().is_rectangular());
    CHECK(!triangular_kernel().is_rectangular());
    CHECK(rectangular_kernel().integral() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(triangular_kernel().integral() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rectangular_kernel().first_moment() == doctest::Approx(0.0));
    CHECK(triangular_kernel().first_moment() == doctest::Approx(0.0));

    Kernel bad;
    bad.name = "bad";
    bad.atoms = {{-1.0, 0.5}, {1.0, -0.25}}; // jumps do not cancel
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    Kernel outside;
    outside.name = "outside";
    outside.atoms = {{-1.5, 0.5}, {1.0, -0.5}};
    CHECK_THROWS_AS(outside.validate(), std::invalid_argument);

    Kernel not_normalized;
    not_normalized.name = "half";
    not_normalized.atoms = {{-1.0, 0.25}, {1.0, -0.25}};
    CHECK_THROWS_AS(not_normalized.validate(), std::invalid_argument);
}

TEST_CASE("kernel text format") {
    std::istringstream rect_text("# rectangular\natom -1 0.5\natom 1 -0.5\n");
    const Kernel k = parse_kernel(rect_text, "custom-rect");
    CHECK(k.is_rectangular());

    std::istringstream tri_text("pl -1 0\npl 0 1\npl 1 0\n");
    const Kernel t = parse_kernel(tri_text, "custom-tri");
    CHECK(t.psi(0.0) == doctest::Approx(1.0));
    CHECK(t.psi(0.5) == doctest::Approx(0.5));

    std::istringstream junk("atom -1\n");
    CHECK_THROWS_AS(parse_kernel(junk), std::invalid_argument);
    std::istringstream unknown("box 0 1\n");
    CHECK_THROWS_AS(parse_kernel(unknown), std::invalid_argument);

    CHECK(load_kernel("rect").is_rectangular());
    CHECK(load_kernel("triangle").pl_x.size() == 3);
    CHECK_THROWS_AS(load_kernel("/nonexistent/kernel.txt"), std::invalid_argument);
}

TEST_CASE("c_psi closed forms") {
    // Rectangular: C^2 = 2^{alpha-2} exactly (atom-atom sum).
    for (double alpha : {0.5, 1.0, 1.5})
        CHECK(c_psi(rectangular_kernel(), alpha) ==
              doctest::Approx(std::pow(2.0, 0.5 * (alpha - 2.0))).epsilon(1e-14));
    CHECK(c_psi(rectangular_kernel(), 1.0) == doctest::Approx(1.0 / std::numbers::sqrt2));

    // Triangular at alpha = 1: sqrt(2/3), via the closed form and the
    // brute-force lattice oracle.
    const Kernel tri = triangular_kernel();
    CHECK(c_psi(tri, 1.0) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-8));
    for (double alpha : {0.5, 1.0, 1.5}) {
        CHECK(c_psi(tri, alpha) == doctest::Approx(c_triangle_closed_form(alpha)).epsilon(1e-8));
        CHECK(c_psi(tri, alpha) == doctest::Approx(c_density_bruteforce(tri, alpha)).epsilon(5e-4));
    }

    // A mixed atom + density kernel still satisfies C^2 > 0 and the Stieltjes
    // assembly agrees with a direct computation: psi = 1/4 rectangle plus a
    // half-weight triangle.
    Kernel mixed;
    mixed.name = "mixed";
    mixed.atoms = {{-1.0, 0.25}, {1.0, -0.25}};
    mixed.pl_x = {-1.0, 0.0, 1.0};
    mixed.pl_y = {0.0, 0.5, 0.0};
    mixed.validate();
    CHECK(c_psi(mixed, 1.2) > 0.0);

    CHECK_THROWS_AS(c_psi(rectangular_kernel(), 2.0), std::invalid_argument);
}

TEST_CASE("regularization of deterministic paths") {
    const TimeGrid grid(1.0, 65, 0.25);
    const double eps = 0.125;

    // Constant path: B^eps == c, derivative == 0 (kernel integral is 1).
    for (const Kernel& k : {rectangular_kernel(), triangular_kernel()}) {
        const SamplePath c = make_deterministic_path(grid, [](double) { return 3.25; });
        const RegularizedPath reg = regularize_path(c, k, eps);
        for (double v : reg.values) CHECK(v == doctest::Approx(3.25).epsilon(1e-12));
        for (double d : reg.derivative) CHECK(d == doctest::Approx(0.0).scale(1.0));
    }

    // Linear path t: B^eps(t) = t - eps * m1(psi); symmetric kernels have
    // m1 = 0; derivative == 1.
    for (const Kernel& k : {rectangular_kernel(), triangular_kernel()}) {
        const SamplePath lin = make_deterministic_path(grid, [](double t) { return t; });
        const RegularizedPath reg = regularize_path(lin, k, eps);
        for (int c = 0; c < grid.n; ++c) {
            const double t = grid.time(grid.core_begin() + c);
            CHECK(reg.values[c] == doctest::Approx(t).epsilon(1e-12).scale(1.0));
            CHECK(reg.derivative[c] == doctest::Approx(1.0).epsilon(1e-10));
        }
    }

    // Asymmetric pure-atom kernel psi = 1 on [-1, 0]: m1 = -1/2, so the
    // smoothed linear path is t + eps/2.
    {
        Kernel left;
        left.name = "left-box";
        left.atoms = {{-1.0, 1.0}, {0.0, -1.0}};
        left.validate();
        CHECK(left.first_moment() == doctest::Approx(-0.5));
        const SamplePath lin = make_deterministic_path(grid, [](double t) { return t; });
        const RegularizedPath reg = regularize_path(lin, left, eps);
        for (int c = 0; c < grid.n; ++c) {
            const double t = grid.time(grid.core_begin() + c);
            CHECK(reg.values[c] == doctest::Approx(t + 0.5 * eps).epsilon(1e-12));
        }
    }
}

TEST_CASE("rectangular kernel closed forms on random paths") {
    const TimeGrid grid(1.0, 129, 0.25);
    RngStream rng(99, 0);
    const SamplePath path = generate_gbm(GreyParams(1.2, 0.6), grid, rng);
    const double eps = 0.125;
    const int k = 16; // eps / delta

    const RegularizedPath reg = regularize_path(path, rectangular_kernel(), eps);
    for (int c = 0; c < grid.n; ++c) {
        const int i = grid.core_begin() + c;
        // Derivative: (B(t+eps) - B(t-eps)) / (2 eps), exactly.
        const double expect = (path.values[i + k] - path.values[i - k]) / (2.0 * eps);
        CHECK(reg.derivative[c] == doctest::Approx(expect).epsilon(1e-13));
        // Value: trapezoid window average.
        double acc = 0.5 * (path.values[i - k] + path.values[i + k]);
        for (int j = i - k + 1; j < i + k; ++j) acc += path.values[j];
        CHECK(reg.values[c] ==
              doctest::Approx(acc * grid.delta / (2.0 * eps)).epsilon(1e-12));
    }

    // z_tilde is the scaled derivative: eps^{-alpha/2} (B(t+eps)-B(t-eps))/2.
    const std::vector<double> zt = z_tilde(reg, 1.2);
    for (int c = 0; c < grid.n; ++c) {
        const int i = grid.core_begin() + c;
        const double expect =
            std::pow(eps, -0.6) * (path.values[i + k] - path.values[i - k]) / 2.0;
        CHECK(zt[c] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("regularization is linear and preserves normalization") {
    const TimeGrid grid(1.0, 65, 0.25);
    RngStream rng(7, 0);
    const SamplePath x = generate_gbm(GreyParams(1.0, 0.8), grid, rng);
    const SamplePath y = generate_gbm(GreyParams(1.0, 0.8), grid, rng);
    const double eps = 0.25;

    for (const Kernel& k : {rectangular_kernel(), triangular_kernel()}) {
        SamplePath combo = x;
        for (int i = 0; i < grid.total_points(); ++i)
            combo.values[i] = 2.0 * x.values[i] - 3.0 * y.values[i];
        const RegularizedPath rx = regularize_path(x, k, eps);
        const RegularizedPath ry = regularize_path(y, k, eps);
        const RegularizedPath rc = regularize_path(combo, k, eps);
        for (int c = 0; c < grid.n; ++c) {
            CHECK(rc.values[c] ==
                  doctest::Approx(2.0 * rx.values[c] - 3.0 * ry.values[c]).epsilon(1e-11));
            CHECK(rc.derivative[c] ==
                  doctest::Approx(2.0 * rx.derivative[c] - 3.0 * ry.derivative[c])
                      .epsilon(1e-10)
                      .scale(1.0));
        }

        // Unit path maps to the unit path within 1e-10.
        const SamplePath ones = make_deterministic_path(grid, [](double) { return 1.0; });
        const RegularizedPath runit = regularize_path(ones, k, eps);
        for (double v : runit.values) CHECK(std::abs(v - 1.0) < 1e-10);
    }
}

TEST_CASE("triangular derivative is consistent with finite differences") {
    // For a smooth path the assembled derivative sequence matches the
    // centered finite difference of the values within 10 * delta * max|B| / eps.
    const TimeGrid grid(1.0, 257, 0.25);
    const SamplePath smooth =
        make_deterministic_path(grid, [](double t) { return std::sin(6.0 * t); });
    const double eps = 0.125;
    const RegularizedPath reg = regularize_path(smooth, triangular_kernel(), eps);

    double max_b = 0.0;
    for (double v : smooth.values) max_b = std::max(max_b, std::abs(v));
    const double tol = 10.0 * grid.delta * max_b / eps;

    for (int c = 1; c + 1 < grid.n; ++c) {
        const double fd = (reg.values[c + 1] - reg.values[c - 1]) / (2.0 * grid.delta);
        CHECK(std::abs(fd - reg.derivative[c]) < tol);
    }
}

TEST_CASE("conditional variance of the normalized derivative") {
    // Var(Z~ | Y) = Y C_psi^2; rectangular kernel gives Y 2^{alpha-2}.
    const double alpha = 1.2;
    const GreyParams params(alpha, 0.6);
    const TimeGrid grid(1.0, 257, 0.125);
    FbmGenerator gen(params.hurst(), grid);
    RngStream rng(31, 0);
    const double eps = 0.125;

    double ratio_sum = 0.0;
    const int reps = 60;
    for (int r = 0; r < reps; ++r) {
        const SamplePath path = generate_gbm(params, gen, rng);
        const RegularizedPath reg = regularize_path(path, rectangular_kernel(), eps);
        const std::vector<double> zt = z_tilde(reg, alpha);
        double s2 = 0.0;
        for (double v : zt) s2 += v * v;
        ratio_sum += s2 / zt.size() / (path.mixing->value * std::pow(2.0, alpha - 2.0));
    }
    CHECK(ratio_sum / reps == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("regularize preconditions") {
    const TimeGrid grid(1.0, 65, 0.25);
    RngStream rng(1, 0);
    const SamplePath path = generate_gbm(GreyParams(1.0, 0.8), grid, rng);
    CHECK_THROWS_AS(regularize_path(path, rectangular_kernel(), 0.5), std::invalid_argument);
    CHECK_THROWS_AS(regularize_path(path, rectangular_kernel(), 0.26), std::invalid_argument);
    CHECK_THROWS_AS(regularize_path(path, rectangular_kernel(), 0.0), std::invalid_argument);
    CHECK_NOTHROW(regularize_path(path, rectangular_kernel(), 0.25));
}
