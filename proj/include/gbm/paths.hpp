#ifndef GBM_PATHS_HPP
#define GBM_PATHS_HPP

// Sample paths on uniform grids: exact-covariance fractional Brownian motion
// via circulant embedding of the increment covariance (dense factorization
// fallback), the variance-mixture assembly of the process, exact second-order
// quantities, and scalar samples from the subordination representations.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gbm/rng.hpp"
#include "gbm/sampling.hpp"
#include "gbm/specfun.hpp"

namespace gbm {

// Uniform grid on [0, T] with n points plus a symmetric extension margin so
// values exist on [-ext, T+ext]; ext must be an integer multiple of the
// spacing T/(n-1).
struct TimeGrid {
    double horizon;
    int n;
    double ext;

    double delta;
    int ext_steps;

    TimeGrid(double horizon_, int n_, double ext_ = 0.0);

    int total_points() const { return n + 2 * ext_steps; }
    int zero_index() const { return ext_steps; }
    int core_begin() const { return ext_steps; }
    int core_end() const { return ext_steps + n; } // one past the last core index
    double time(int i) const { return (i - ext_steps) * delta; }
};

enum class ProcessTag { fbm, gbm, regularized };

struct SamplePath {
    TimeGrid grid;
    std::vector<double> values; // one per grid point, extension included
    ProcessTag tag;
    GreyParams params;
    std::optional<MixingVariable> mixing;
};

// Exact covariance E[B(t)B(s)] = (t^a + s^a - |t-s|^a) / (2 Gamma(beta+1)).
double covariance(const GreyParams& params, double t, double s);

// Exact even moment E[B^{2n}(t)] = (2n)!/(2^n Gamma(beta n + 1)) t^{n alpha};
// odd moments vanish.
double even_moment(const GreyParams& params, int n, double t);

// Characteristic function of an increment: E_beta(-theta^2/2 |t-s|^alpha).
double char_increment(const GreyParams& params, double theta, double t, double s,
                      const EvalConfig& cfg = {});

// Generator for standard fBm paths with Hurst parameter H on a fixed grid.
// The stationary increment covariance is embedded in a circulant matrix
// whose spectrum is precomputed once; eigenvalues in [-1e-9, 0) are clipped
// to zero (counted), anything below -1e-9 triggers the dense-factorization
// fallback. Safe for concurrent generate() calls.
class FbmGenerator {
public:
    FbmGenerator(double hurst, const TimeGrid& grid);
    ~FbmGenerator();
    FbmGenerator(const FbmGenerator&) = delete;
    FbmGenerator& operator=(const FbmGenerator&) = delete;

    SamplePath generate(RngStream& rng) const;

    double hurst() const { return hurst_; }
    bool used_dense_fallback() const { return dense_; }
    int clipped_eigenvalues() const { return clipped_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    double hurst_;
    TimeGrid grid_;
    bool dense_ = false;
    int clipped_ = 0;
};

// One fBm path (pinned to 0 at t = 0 exactly; the law is unchanged because
// increments are stationary).
SamplePath generate_fbm(double hurst, const TimeGrid& grid, RngStream& rng);

// Grey Brownian motion path sqrt(Y) * fBm with H = alpha/2; the realized Y
// is drawn first and recorded in `mixing`.
SamplePath generate_gbm(const GreyParams& params, const TimeGrid& grid, RngStream& rng);
SamplePath generate_gbm(const GreyParams& params, const FbmGenerator& fbm, RngStream& rng);

enum class SubordinationVariant { bm_inverse_subordinator, fbm_d_beta };

// Scalar sample whose law is the process marginal at time t, obtained
// through one of the subordination representations (one-dimensional only).
double sample_gbm_marginal_subordinated(const GreyParams& params, double t,
                                        SubordinationVariant variant, RngStream& rng);

// Serialization: CSV (time,value) and a compact binary layout for caching.
// Binary header: magic "GBMPATH1", u32 version, u64 core point count n,
// f64 delta, f64 ext, f64 alpha, f64 beta, f64 Y (NaN when absent),
// u8 process tag, then all values as f64 (extension included).
void write_path_csv(const SamplePath& path, std::ostream& out);
void write_path_csv(const SamplePath& path, const std::string& filename);
void write_path_binary(const SamplePath& path, const std::string& filename);
SamplePath read_path_binary(const std::string& filename);

} // namespace gbm

#endif
