#include <doctest.h>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include "gbm/paths.hpp"
#include "gbm/stats.hpp"

using namespace gbm;

TEST_CASE("time grid layout") {
    TimeGrid g(1.0, 5, 0.5);
    CHECK(g.delta == doctest::Approx(0.25));
    CHECK(g.ext_steps == 2);
    CHECK(g.total_points() == 9);
    CHECK(g.time(0) == doctest::Approx(-0.5));
    CHECK(g.time(g.zero_index()) == 0.0);
    CHECK(g.time(g.total_points() - 1) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(g.time(g.core_end() - 1) == doctest::Approx(1.0));
    CHECK_THROWS_AS(TimeGrid(1.0, 5, 0.3), std::invalid_argument); // not a multiple of 0.25
    CHECK_THROWS_AS(TimeGrid(0.0, 5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(1.0, 1, 0.0), std::invalid_argument);
}

TEST_CASE("covariance closed form") {
    CHECK(covariance(GreyParams(1.0, 1.0), 2.0, 1.0) == doctest::Approx(1.0)); // Bm min(t,s)
    CHECK(covariance(GreyParams(1.3, 0.7), 5.0, 0.0) == 0.0);
    CHECK(covariance(GreyParams(1.5, 0.5), 1.0, 1.0) ==
          doctest::Approx(2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("even moments") {
    CHECK(even_moment(GreyParams(1.0, 1.0), 1, 1.0) == doctest::Approx(1.0));
    CHECK(even_moment(GreyParams(0.8, 0.5), 2, 1.0) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(even_moment(GreyParams(1.1, 0.4), 3, 0.0) == 0.0);

    // Self-similarity in the moments: E B^{2n}(ct) = c^{n alpha} E B^{2n}(t).
    const GreyParams p(1.3, 0.6);
    for (int n = 1; n <= 3; ++n)
        for (double c : {0.5, 2.0, 7.0})
            CHECK(even_moment(p, n, c * 1.7) ==
                  doctest::Approx(std::pow(c, n * p.alpha) * even_moment(p, n, 1.7))
                      .epsilon(1e-12));
}

TEST_CASE("increment characteristic function") {
    const GreyParams p(1.2, 0.6);
    CHECK(char_increment(p, 0.0, 3.0, 1.0) == doctest::Approx(1.0));
    CHECK(char_increment(GreyParams(1.0, 1.0), 1.0, 1.0, 0.0) ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(char_increment(p, 2.0, 3.0, 1.0) ==
          doctest::Approx(mittag_leffler(0.6, -2.0 * std::pow(2.0, 1.2))).epsilon(1e-12));

    // Stationarity: dependence on (t, s) only through |t - s| (dyadic shifts
    // keep the lag bit-exact).
    for (double shift : {0.25, 1.5, 2.75})
        CHECK(char_increment(p, 1.3, 2.0 + shift, 0.5 + shift) ==
              char_increment(p, 1.3, 2.0, 0.5));
}

TEST_CASE("covariance matrices are positive semidefinite") {
    RngStream rng(31, 0);
    for (const GreyParams& p : {GreyParams(0.6, 0.4), GreyParams(1.2, 0.6), GreyParams(1.8, 1.0)}) {
        std::vector<double> times(64);
        for (double& t : times) t = 3.0 * rng.uniform_open();
        Eigen::MatrixXd sigma(64, 64);
        for (int i = 0; i < 64; ++i)
            for (int j = 0; j < 64; ++j) sigma(i, j) = covariance(p, times[i], times[j]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10 * sigma.trace());
    }
}

TEST_CASE("fbm generator matches the closed-form covariance") {
    // 16-point grid; empirical covariance over 200000 paths within 4 standard
    // errors, for both the circulant route and the dense-factorization
    // oracle.
    const TimeGrid grid(1.0, 16, 0.0);
    const double hurst = 0.7;
    const int n_paths = 200000;

    auto run = [&](bool dense) {
        FbmGenerator gen(hurst, grid);
        REQUIRE(gen.used_dense_fallback() == false);
        std::vector<std::vector<double>> paths(n_paths);
        RngStream rng(404, dense ? 1 : 0);
        if (!dense) {
            for (auto& p : paths) p = gen.generate(rng).values;
        } else {
            // Dense oracle: Cholesky of the full path covariance at positive
            // times (independent of the circulant machinery).
            const int m = grid.total_points();
            Eigen::MatrixXd cov(m - 1, m - 1);
            for (int i = 1; i < m; ++i)
                for (int j = 1; j < m; ++j)
                    cov(i - 1, j - 1) =
                        covariance(GreyParams(2.0 * hurst, 1.0), grid.time(i), grid.time(j));
            Eigen::LLT<Eigen::MatrixXd> llt(cov);
            REQUIRE(llt.info() == Eigen::Success);
            const Eigen::MatrixXd lower = llt.matrixL();
            for (auto& p : paths) {
                Eigen::VectorXd g(m - 1);
                for (int i = 0; i < m - 1; ++i) g(i) = rng.normal();
                Eigen::VectorXd x = lower * g;
                p.resize(m);
                p[0] = 0.0;
                for (int i = 1; i < m; ++i) p[i] = x(i - 1);
            }
        }

        // Spot-check a set of entries including the example pair (0.5, 1.0).
        const std::pair<int, int> entries[] = {{8, 8}, {15, 15}, {7, 15}, {3, 11}, {5, 10}};
        for (auto [i, j] : entries) {
            double s = 0.0, s2 = 0.0;
            for (const auto& p : paths) {
                const double v = p[i] * p[j];
                s += v;
                s2 += v * v;
            }
            const double mean = s / n_paths;
            const double se = std::sqrt((s2 / n_paths - mean * mean) / n_paths);
            const double exact =
                covariance(GreyParams(2.0 * hurst, 1.0), grid.time(i), grid.time(j));
            INFO((dense ? "dense" : "circulant"), " entry ", i, ",", j);
            CHECK(std::abs(mean - exact) < 4.0 * se);
        }
    };
    run(false);
    run(true);

    // The example pair: Cov(B(0.5), B(1.0)) = 0.5 for H = 0.7 on this grid.
    CHECK(covariance(GreyParams(1.4, 1.0), 0.5, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("fbm basics") {
    const TimeGrid grid(1.0, 33, 0.0);
    // Variance at t = 1 is 1 for any H; N = 10000 paths, 4 standard errors.
    {
        FbmGenerator gen(0.7, grid);
        RngStream rng(7, 0);
        double s = 0.0, s2 = 0.0;
        const int n = 10000;
        for (int i = 0; i < n; ++i) {
            const double v = gen.generate(rng).values.back();
            s += v * v;
            s2 += v * v * v * v;
        }
        const double mean = s / n;
        const double se = std::sqrt((s2 / n - mean * mean) / n);
        CHECK(std::abs(mean - 1.0) < 4.0 * se);
    }

    // H = 1/2: increments are independent; lag-1 autocorrelation vanishes.
    {
        FbmGenerator gen(0.5, grid);
        RngStream rng(8, 0);
        double num = 0.0, den = 0.0;
        const int n = 4000;
        for (int r = 0; r < n; ++r) {
            const SamplePath p = gen.generate(rng);
            for (std::size_t i = 0; i + 2 < p.values.size(); ++i) {
                const double a = p.values[i + 1] - p.values[i];
                const double b = p.values[i + 2] - p.values[i + 1];
                num += a * b;
                den += a * a;
            }
        }
        CHECK(std::abs(num / den) < 4.0 / std::sqrt(static_cast<double>(n) * 31.0));
    }

    // Pinning: value at t = 0 is exactly zero, extension included.
    {
        const TimeGrid egrid(1.0, 17, 0.25);
        FbmGenerator gen(0.6, egrid);
        RngStream rng(9, 0);
        const SamplePath p = gen.generate(rng);
        CHECK(p.values[egrid.zero_index()] == 0.0);
        CHECK(p.values.size() == static_cast<std::size_t>(egrid.total_points()));
    }
}

TEST_CASE("gbm assembly") {
    const TimeGrid grid(1.0, 17, 0.0);

    // beta = 1: the path coincides with the underlying fBm path.
    {
        RngStream rng_a(12, 0), rng_b(12, 0);
        const SamplePath f = generate_fbm(0.6, grid, rng_a);
        const SamplePath g = generate_gbm(GreyParams(1.2, 1.0), grid, rng_b);
        REQUIRE(g.mixing.has_value());
        CHECK(g.mixing->value == 1.0);
        for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(f.values[i] == g.values[i]);
    }

    // E[B^2(1)] = 1/Gamma(1.6) for (alpha, beta) = (1.2, 0.6); the recorded
    // mixing variable matches the path scale.
    {
        const GreyParams p(1.2, 0.6);
        FbmGenerator gen(p.hurst(), grid);
        RngStream rng(13, 0);
        const int n = 30000;
        double s = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const SamplePath path = generate_gbm(p, gen, rng);
            const double v = path.values.back() * path.values.back();
            s += v;
            s2 += v * v;
        }
        const double mean = s / n;
        const double se = std::sqrt((s2 / n - mean * mean) / n);
        CHECK(std::abs(mean - 1.0 / std::tgamma(1.6)) < 4.0 * se);
    }

    // Fourth moment at t = 1 for (alpha, beta) = (1, 0.5): 24/(4 Gamma(2)) = 6,
    // cross-checked against even_moment.
    {
        const GreyParams p(1.0, 0.5);
        CHECK(even_moment(p, 2, 1.0) == doctest::Approx(6.0));
        FbmGenerator gen(p.hurst(), grid);
        RngStream rng(14, 0);
        const int n = 200000;
        double s = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const SamplePath path = generate_gbm(p, gen, rng);
            const double v = std::pow(path.values.back(), 4);
            s += v;
            s2 += v * v;
        }
        const double mean = s / n;
        const double se = std::sqrt((s2 / n - mean * mean) / n);
        CHECK(std::abs(mean - 6.0) < 4.0 * se);
    }
}

TEST_CASE("Hoelder scaling of absolute increment moments") {
    // E|B(t)-B(s)|^p = c_p |t-s|^{p alpha/2} with
    // c_p = Gamma(p/2+1)/Gamma(beta p/2+1) * E|N|^p.
    const GreyParams params(1.2, 0.6);
    const TimeGrid grid(1.0, 33, 0.0);
    FbmGenerator gen(params.hurst(), grid);
    const int n = 60000;

    for (double p : {1.0, 3.0}) {
        const double cp = std::tgamma(0.5 * p + 1.0) / std::tgamma(0.5 * params.beta * p + 1.0) *
                          normal_abs_moment(p);
        int stream = 0;
        for (auto [i, j] : {std::pair<int, int>{6, 12}, {8, 32}}) {
            RngStream rng(21, stream++);
            double s = 0.0, s2 = 0.0;
            for (int r = 0; r < n; ++r) {
                const SamplePath path = generate_gbm(params, gen, rng);
                const double v = std::pow(std::abs(path.values[j] - path.values[i]), p);
                s += v;
                s2 += v * v;
            }
            const double lag = grid.time(j) - grid.time(i);
            const double mean = s / n;
            const double se = std::sqrt((s2 / n - mean * mean) / n);
            const double target = cp * std::pow(lag, 0.5 * p * params.alpha);
            INFO("p ", p, " lag ", lag);
            CHECK(std::abs(mean - target) < 4.0 * se);
        }
    }
}

TEST_CASE("subordinated marginals match the mixture law") {
    const GreyParams params(1.2, 0.6);
    const double t = 1.0;
    const int n = 50000;

    std::vector<double> mixture(n);
    RngStream rng_m(55, 0);
    for (int i = 0; i < n; ++i)
        mixture[i] = std::sqrt(sample_y_beta(params.beta, rng_m).value) *
                     std::pow(t, 0.5 * params.alpha) * rng_m.normal();
    const EmpiricalLaw mix(std::move(mixture));

    int stream = 1;
    for (auto variant :
         {SubordinationVariant::bm_inverse_subordinator, SubordinationVariant::fbm_d_beta}) {
        std::vector<double> sub(n);
        RngStream rng(55, stream++);
        for (int i = 0; i < n; ++i)
            sub[i] = sample_gbm_marginal_subordinated(params, t, variant, rng);
        const EmpiricalLaw law(std::move(sub));
        CHECK(EmpiricalLaw::ks_two_sample(law, mix) <
              EmpiricalLaw::ks_critical_two_sample(n, n, 0.01));

        // Second moment: 1/Gamma(beta+1) at t = 1; fourth: even_moment n=2.
        double s2 = 0.0, s4 = 0.0, s8 = 0.0;
        for (double v : law.sorted()) {
            s2 += v * v;
            s4 += std::pow(v, 4);
            s8 += std::pow(v, 8);
        }
        const double m2 = s2 / n, m4 = s4 / n;
        const double se2 = std::sqrt((s4 / n - m2 * m2) / n);
        const double se4 = std::sqrt((s8 / n - m4 * m4) / n);
        CHECK(std::abs(m2 - even_moment(params, 1, t)) < 4.0 * se2);
        CHECK(std::abs(m4 - even_moment(params, 2, t)) < 4.0 * se4);
    }
}

TEST_CASE("path serialization") {
    const TimeGrid grid(1.0, 9, 0.25);
    RngStream rng(61, 0);
    SamplePath path = generate_gbm(GreyParams(1.2, 0.6), grid, rng);

    const std::string dir = std::filesystem::temp_directory_path() / "gbm_path_io_test";
    std::filesystem::create_directories(dir);

    // Binary round trip is bit-exact.
    const std::string bin = dir + "/path.bin";
    write_path_binary(path, bin);
    const SamplePath back = read_path_binary(bin);
    CHECK(back.grid.n == path.grid.n);
    CHECK(back.grid.delta == path.grid.delta);
    CHECK(back.grid.ext == path.grid.ext);
    CHECK(back.params.alpha == path.params.alpha);
    CHECK(back.params.beta == path.params.beta);
    REQUIRE(back.mixing.has_value());
    CHECK(back.mixing->value == path.mixing->value);
    CHECK(back.tag == path.tag);
    REQUIRE(back.values.size() == path.values.size());
    for (std::size_t i = 0; i < path.values.size(); ++i) CHECK(back.values[i] == path.values[i]);

    // CSV has a header and one row per grid point.
    const std::string csv = dir + "/path.csv";
    write_path_csv(path, csv);
    std::ifstream in(csv);
    std::string line;
    int rows = 0;
    bool header = false;
    while (std::getline(in, line)) {
        if (rows == 0) header = (line == "time,value");
        ++rows;
    }
    CHECK(header);
    CHECK(rows == grid.total_points() + 1);
    std::filesystem::remove_all(dir);
}
