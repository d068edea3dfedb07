#include "gbm/paths.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>

namespace gbm {

namespace {

// FFTW plan creation is not thread-safe; executions via the new-array
// interface are.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

// Autocovariance of fGn increments at spacing delta for standard fBm:
// gamma(j) = delta^{2H}/2 (|j+1|^{2H} - 2|j|^{2H} + |j-1|^{2H}).
double fgn_autocov(double hurst, double delta, long j) {
    const double h2 = 2.0 * hurst;
    const double a = std::abs(static_cast<double>(j));
    return 0.5 * std::pow(delta, h2) *
           (std::pow(a + 1.0, h2) - 2.0 * std::pow(a, h2) +
            (j == 0 ? 1.0 : std::pow(a - 1.0, h2)));
}

} // namespace

TimeGrid::TimeGrid(double horizon_, int n_, double ext_)
    : horizon(horizon_), n(n_), ext(ext_) {
    if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be > 0");
    if (n < 2) throw std::invalid_argument("TimeGrid: need at least 2 grid points");
    if (!(ext >= 0.0)) throw std::invalid_argument("TimeGrid: ext must be >= 0");
    delta = horizon / (n - 1);
    const double steps = ext / delta;
    ext_steps = static_cast<int>(std::lround(steps));
    if (std::abs(steps - ext_steps) > 1e-9 * (1.0 + steps))
        throw std::invalid_argument("TimeGrid: ext must be an integer multiple of the spacing");
}

double covariance(const GreyParams& params, double t, double s) {
    if (!(t >= 0.0) || !(s >= 0.0)) throw std::invalid_argument("covariance: t, s must be >= 0");
    const double a = params.alpha;
    return (std::pow(t, a) + std::pow(s, a) - std::pow(std::abs(t - s), a)) /
           (2.0 * std::tgamma(params.beta + 1.0));
}

double even_moment(const GreyParams& params, int n, double t) {
    if (n < 1) throw std::invalid_argument("even_moment: n must be >= 1");
    if (!(t >= 0.0)) throw std::invalid_argument("even_moment: t must be >= 0");
    if (t == 0.0) return 0.0;
    return std::tgamma(2.0 * n + 1.0) /
           (std::pow(2.0, n) * std::tgamma(params.beta * n + 1.0)) *
           std::pow(t, n * params.alpha);
}

double char_increment(const GreyParams& params, double theta, double t, double s,
                      const EvalConfig& cfg) {
    if (!(t >= 0.0) || !(s >= 0.0))
        throw std::invalid_argument("char_increment: t, s must be >= 0");
    const double lag = std::abs(t - s);
    return mittag_leffler(params.beta, -0.5 * theta * theta * std::pow(lag, params.alpha), cfg);
}

struct FbmGenerator::Impl {
    long m = 0;              // total grid points
    long big = 0;            // circulant size 2(m-1)
    std::vector<double> sqrt_lambda;
    fftw_plan plan = nullptr;
    Eigen::MatrixXd chol;    // lower factor of the increment covariance (fallback)

    ~Impl() {
        if (plan) {
            std::lock_guard<std::mutex> lock(fftw_mutex());
            fftw_destroy_plan(plan);
        }
    }
};

FbmGenerator::FbmGenerator(double hurst, const TimeGrid& grid)
    : impl_(std::make_unique<Impl>()), hurst_(hurst), grid_(grid) {
    if (!(hurst > 0.0 && hurst < 1.0))
        throw std::invalid_argument("FbmGenerator: Hurst parameter must lie in (0,1)");

    const long m = grid.total_points();
    const long len = m - 1; // increment count
    const long big = 2 * len;
    impl_->m = m;
    impl_->big = big;

    // First row of the circulant embedding.
    std::vector<double> first_row(big);
    for (long k = 0; k <= len; ++k) first_row[k] = fgn_autocov(hurst, grid.delta, k);
    for (long k = len + 1; k < big; ++k) first_row[k] = first_row[big - k];

    std::vector<double> lambda(big);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_complex* in = fftw_alloc_complex(big);
        fftw_complex* out = fftw_alloc_complex(big);
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(big), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
        for (long k = 0; k < big; ++k) {
            in[k][0] = first_row[k];
            in[k][1] = 0.0;
        }
        fftw_execute(p);
        for (long k = 0; k < big; ++k) lambda[k] = out[k][0];
        fftw_destroy_plan(p);
        fftw_free(in);
        fftw_free(out);
    }

    const double min_lambda = *std::min_element(lambda.begin(), lambda.end());
    if (min_lambda < -1e-9) {
        dense_ = true;
    } else {
        impl_->sqrt_lambda.resize(big);
        for (long k = 0; k < big; ++k) {
            double l = lambda[k];
            if (l < 0.0) {
                l = 0.0;
                ++clipped_;
            }
            impl_->sqrt_lambda[k] = std::sqrt(l);
        }
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_complex* in = fftw_alloc_complex(big);
        fftw_complex* out = fftw_alloc_complex(big);
        impl_->plan =
            fftw_plan_dft_1d(static_cast<int>(big), in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
        fftw_free(in);
        fftw_free(out);
    }

    if (dense_) {
        // Exact dense route: Cholesky of the Toeplitz increment covariance.
        Eigen::MatrixXd cov(len, len);
        for (long i = 0; i < len; ++i)
            for (long j = 0; j < len; ++j) cov(i, j) = fgn_autocov(hurst, grid.delta, i - j);
        Eigen::LLT<Eigen::MatrixXd> llt(cov);
        if (llt.info() != Eigen::Success)
            throw EvaluationError("FbmGenerator: dense factorization failed");
        impl_->chol = llt.matrixL();
    }
}

FbmGenerator::~FbmGenerator() = default;

SamplePath FbmGenerator::generate(RngStream& rng) const {
    const long m = impl_->m;
    const long len = m - 1;
    std::vector<double> increments(len);

    if (!dense_) {
        const long big = impl_->big;
        // Only fftw_execute_dft is documented thread-safe; serialize the
        // allocator like the planner.
        fftw_complex* in;
        fftw_complex* out;
        {
            std::lock_guard<std::mutex> lock(fftw_mutex());
            in = fftw_alloc_complex(big);
            out = fftw_alloc_complex(big);
        }

        // Hermitian-symmetric spectral noise; fixed consumption order keeps
        // the path a pure function of the stream.
        in[0][0] = impl_->sqrt_lambda[0] * rng.normal();
        in[0][1] = 0.0;
        const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
        for (long k = 1; k < big / 2; ++k) {
            const double re = rng.normal() * inv_sqrt2;
            const double im = rng.normal() * inv_sqrt2;
            in[k][0] = impl_->sqrt_lambda[k] * re;
            in[k][1] = impl_->sqrt_lambda[k] * im;
            in[big - k][0] = in[k][0];
            in[big - k][1] = -in[k][1];
        }
        in[big / 2][0] = impl_->sqrt_lambda[big / 2] * rng.normal();
        in[big / 2][1] = 0.0;

        fftw_execute_dft(impl_->plan, in, out);
        const double scale = 1.0 / std::sqrt(static_cast<double>(big));
        for (long j = 0; j < len; ++j) increments[j] = out[j][0] * scale;
        {
            std::lock_guard<std::mutex> lock(fftw_mutex());
            fftw_free(in);
            fftw_free(out);
        }
    } else {
        Eigen::VectorXd g(len);
        for (long j = 0; j < len; ++j) g(j) = rng.normal();
        Eigen::VectorXd x = impl_->chol * g;
        for (long j = 0; j < len; ++j) increments[j] = x(j);
    }

    SamplePath path{grid_, std::vector<double>(m), ProcessTag::fbm, GreyParams(2.0 * hurst_, 1.0),
                    std::nullopt};
    path.values[0] = 0.0;
    for (long j = 0; j < len; ++j) path.values[j + 1] = path.values[j] + increments[j];

    // Re-pin so the value at t = 0 is exactly zero.
    const double at_zero = path.values[grid_.zero_index()];
    for (double& v : path.values) v -= at_zero;
    path.values[grid_.zero_index()] = 0.0;
    return path;
}

SamplePath generate_fbm(double hurst, const TimeGrid& grid, RngStream& rng) {
    FbmGenerator gen(hurst, grid);
    return gen.generate(rng);
}

SamplePath generate_gbm(const GreyParams& params, const FbmGenerator& fbm, RngStream& rng) {
    params.validate();
    const MixingVariable y = sample_y_beta(params.beta, rng);
    SamplePath path = fbm.generate(rng);
    const double root_y = std::sqrt(y.value);
    for (double& v : path.values) v *= root_y;
    path.tag = ProcessTag::gbm;
    path.params = params;
    path.mixing = y;
    return path;
}

SamplePath generate_gbm(const GreyParams& params, const TimeGrid& grid, RngStream& rng) {
    FbmGenerator gen(params.hurst(), grid);
    return generate_gbm(params, gen, rng);
}

double sample_gbm_marginal_subordinated(const GreyParams& params, double t,
                                        SubordinationVariant variant, RngStream& rng) {
    params.validate();
    if (!(t > 0.0))
        throw std::invalid_argument("sample_gbm_marginal_subordinated: t must be > 0");
    const double alpha = params.alpha;
    const double beta = params.beta;

    switch (variant) {
        case SubordinationVariant::bm_inverse_subordinator: {
            // B(E(t^{alpha/beta})) with B standard Brownian motion.
            const double clock = (beta == 1.0)
                                     ? std::pow(t, alpha)
                                     : sample_inverse_subordinator(
                                           beta, std::pow(t, alpha / beta), rng);
            return std::sqrt(clock) * rng.normal();
        }
        case SubordinationVariant::fbm_d_beta: {
            // B_H(D_beta^{1/alpha}(t^{alpha/beta})) with H = alpha/2.
            const double d = (beta == 1.0) ? std::pow(t, alpha)
                                           : sample_d_beta(beta, std::pow(t, alpha / beta), rng);
            const double fbm_time = std::pow(d, 1.0 / alpha);
            return std::pow(fbm_time, 0.5 * alpha) * rng.normal();
        }
    }
    throw std::invalid_argument("sample_gbm_marginal_subordinated: unknown variant");
}

void write_path_csv(const SamplePath& path, std::ostream& out) {
    out << "time,value\n";
    char buf[64];
    for (int i = 0; i < path.grid.total_points(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", path.grid.time(i), path.values[i]);
        out << buf;
    }
}

void write_path_csv(const SamplePath& path, const std::string& filename) {
    std::ofstream out(filename, std::ios::binary);
    if (!out) throw std::runtime_error("write_path_csv: cannot open " + filename);
    write_path_csv(path, out);
}

namespace {
constexpr char kPathMagic[8] = {'G', 'B', 'M', 'P', 'A', 'T', 'H', '1'};
}

void write_path_binary(const SamplePath& path, const std::string& filename) {
    std::ofstream out(filename, std::ios::binary);
    if (!out) throw std::runtime_error("write_path_binary: cannot open " + filename);
    out.write(kPathMagic, 8);
    const std::uint32_t version = 1;
    const std::uint64_t n = static_cast<std::uint64_t>(path.grid.n);
    const double delta = path.grid.delta;
    const double ext = path.grid.ext;
    const double alpha = path.params.alpha;
    const double beta = path.params.beta;
    const double y = path.mixing ? path.mixing->value : std::numeric_limits<double>::quiet_NaN();
    const std::uint8_t tag = static_cast<std::uint8_t>(path.tag);
    out.write(reinterpret_cast<const char*>(&version), sizeof version);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(&delta), sizeof delta);
    out.write(reinterpret_cast<const char*>(&ext), sizeof ext);
    out.write(reinterpret_cast<const char*>(&alpha), sizeof alpha);
    out.write(reinterpret_cast<const char*>(&beta), sizeof beta);
    out.write(reinterpret_cast<const char*>(&y), sizeof y);
    out.write(reinterpret_cast<const char*>(&tag), sizeof tag);
    out.write(reinterpret_cast<const char*>(path.values.data()),
              static_cast<std::streamsize>(path.values.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write_path_binary: write failed for " + filename);
}

SamplePath read_path_binary(const std::string& filename) {
    std::ifstream in(filename, std::ios::binary);
    if (!in) throw std::runtime_error("read_path_binary: cannot open " + filename);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kPathMagic, 8) != 0)
        throw std::runtime_error("read_path_binary: bad magic in " + filename);
    std::uint32_t version = 0;
    std::uint64_t n = 0;
    double delta = 0, ext = 0, alpha = 0, beta = 0, y = 0;
    std::uint8_t tag = 0;
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    in.read(reinterpret_cast<char*>(&delta), sizeof delta);
    in.read(reinterpret_cast<char*>(&ext), sizeof ext);
    in.read(reinterpret_cast<char*>(&alpha), sizeof alpha);
    in.read(reinterpret_cast<char*>(&beta), sizeof beta);
    in.read(reinterpret_cast<char*>(&y), sizeof y);
    in.read(reinterpret_cast<char*>(&tag), sizeof tag);
    if (!in || version != 1)
        throw std::runtime_error("read_path_binary: unsupported header in " + filename);

    TimeGrid grid(delta * (static_cast<double>(n) - 1.0), static_cast<int>(n), ext);
    SamplePath path{grid, std::vector<double>(grid.total_points()),
                    static_cast<ProcessTag>(tag), GreyParams(alpha, beta), std::nullopt};
    in.read(reinterpret_cast<char*>(path.values.data()),
            static_cast<std::streamsize>(path.values.size() * sizeof(double)));
    if (!in) throw std::runtime_error("read_path_binary: truncated file " + filename);
    if (!std::isnan(y)) path.mixing = MixingVariable{y, beta};
    return path;
}

} // namespace gbm
