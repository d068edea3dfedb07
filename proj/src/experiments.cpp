#include "gbm/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gbm/errors.hpp"
#include "gbm/kernel.hpp"
#include "gbm/occupation.hpp"
#include "gbm/paths.hpp"
#include "gbm/quadrature.hpp"
#include "gbm/regularize.hpp"
#include "gbm/sampling.hpp"
#include "gbm/specfun.hpp"
#include "gbm/stats.hpp"
#include "gbm/version.hpp"
#include "parallel.hpp"

namespace gbm {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of empty vector");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int effective_workers(const ExperimentConfig& cfg) {
    if (cfg.workers > 0) return cfg.workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Extension margin for a grid: derived from the requirement (largest epsilon
// in play) unless the user pinned --ext, which must be large enough.
double grid_extension(const ExperimentConfig& cfg, double needed) {
    if (cfg.ext < 0.0) return needed;
    if (cfg.ext + 1e-12 < needed)
        throw std::invalid_argument("ext is smaller than the largest epsilon in the ladder");
    return cfg.ext;
}

// Deterministic CSV writer: fixed "%.12g" formatting, LF newlines.
class CsvWriter {
public:
    CsvWriter(const std::string& dir, const std::string& filename,
              const std::string& header_line, std::vector<std::string>* artifacts) {
        if (dir.empty()) return;
        std::filesystem::create_directories(dir);
        path_ = dir + "/" + filename;
        out_.open(path_, std::ios::binary);
        if (!out_) throw std::runtime_error("cannot open output file " + path_);
        out_ << header_line << "\n";
        if (artifacts) artifacts->push_back(path_);
    }

    void row(const std::vector<std::string>& cells) {
        if (!out_.is_open()) return;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ",";
            out_ << cells[i];
        }
        out_ << "\n";
    }

private:
    std::string path_;
    std::ofstream out_;
};

struct GateList {
    std::vector<GateResult> gates;

    // pass iff value <= threshold
    void upper(const std::string& name, double value, double threshold,
               const std::string& detail = "") {
        gates.push_back({name, value <= threshold, value, threshold, detail});
    }
    // pass iff value within [lo, hi]
    void window(const std::string& name, double value, double lo, double hi,
                const std::string& detail = "") {
        GateResult g{name, value >= lo && value <= hi, value, hi, detail};
        g.detail = detail.empty() ? ("window [" + fmt(lo) + ", " + fmt(hi) + "]")
                                  : detail + "; window [" + fmt(lo) + ", " + fmt(hi) + "]";
        gates.push_back(g);
    }
    void boolean(const std::string& name, bool pass, const std::string& detail = "") {
        gates.push_back({name, pass, pass ? 1.0 : 0.0, 1.0, detail});
    }
};

// ---------------------------------------------------------------------------
// specfun-golden
// ---------------------------------------------------------------------------

ExperimentResult run_specfun_golden(const ExperimentConfig& cfg) {
    ExperimentResult res;
    GateList gates;
    EvalConfig ec;
    ec.abs_tol = 1e-13;

    CsvWriter csv(cfg.write_csv ? cfg.out_dir : std::string(), "specfun_golden.csv", "family,x,value,reference,abs_err",
                  &res.artifacts);

    double worst_e1 = 0.0;
    for (int i = 0; i <= 80; ++i) {
        const double x = -10.0 + 0.25 * i;
        const double v = mittag_leffler(1.0, x, ec);
        const double ref = std::exp(x);
        worst_e1 = std::max(worst_e1, std::abs(v - ref));
        csv.row({"E1", fmt(x), fmt(v), fmt(ref), fmt(std::abs(v - ref))});
    }
    gates.upper("e1_vs_exp_max_abs_err", worst_e1, 1e-12);

    // E_{1/2}(-x^2) = exp(x^4) erfc(x^2)
    double worst_eh = 0.0;
    for (int i = 0; i <= 60; ++i) {
        const double x = 0.05 * i;
        const double v = mittag_leffler(0.5, -x * x, ec);
        const double ref = std::exp(std::pow(x, 4)) * std::erfc(x * x);
        worst_eh = std::max(worst_eh, std::abs(v - ref));
        csv.row({"E_half", fmt(x), fmt(v), fmt(ref), fmt(std::abs(v - ref))});
    }
    gates.upper("e_half_vs_erfc_max_abs_err", worst_eh, 1e-9);

    // M_{1/2}(tau) = exp(-tau^2/4)/sqrt(pi)
    double worst_m = 0.0;
    for (int i = 0; i <= 120; ++i) {
        const double tau = 0.05 * i;
        const double v = m_wright_density(0.5, tau, ec);
        const double ref = std::exp(-0.25 * tau * tau) / std::sqrt(std::numbers::pi);
        worst_m = std::max(worst_m, std::abs(v - ref));
        csv.row({"M_half", fmt(tau), fmt(v), fmt(ref), fmt(std::abs(v - ref))});
    }
    gates.upper("m_half_vs_gaussian_max_abs_err", worst_m, 1e-8);

    res.gates = gates.gates;
    return res;
}

// ---------------------------------------------------------------------------
// ml-moments
// ---------------------------------------------------------------------------

ExperimentResult run_ml_moments(const ExperimentConfig& cfg) {
    ExperimentResult res;
    GateList gates;
    const std::vector<double> betas = {0.3, 0.5, 0.8};
    const int draws = cfg.replicas > 0 ? cfg.replicas : 1000000;

    CsvWriter csv(cfg.write_csv ? cfg.out_dir : std::string(), "ml_moments.csv", "beta,k,method,value,target,tolerance",
                  &res.artifacts);

    EvalConfig ec;
    ec.abs_tol = 1e-12;
    for (double beta : betas) {
        for (int k = 1; k <= 4; ++k) {
            auto integrand = [&](double tau) {
                return std::pow(tau, k) * m_wright_density(beta, tau, ec);
            };
            QuadResult head = integrate_split(integrand, {0.0, 1.0, 4.0, 16.0}, 5e-8);
            QuadResult tail = integrate_semi_infinite(integrand, 16.0, 5e-8);
            const double quad = head.value + tail.value;
            const double target = std::tgamma(k + 1.0) / std::tgamma(beta * k + 1.0);
            gates.upper("quad_moment_b" + fmt(beta) + "_k" + std::to_string(k),
                        std::abs(quad - target), 1e-6);
            csv.row({fmt(beta), std::to_string(k), "quadrature", fmt(quad), fmt(target),
                     "1e-6"});
        }
    }

    // Empirical moments of Y_beta at N = draws, within 4 Monte Carlo standard
    // errors (estimated from the sample).
    for (std::size_t bi = 0; bi < betas.size(); ++bi) {
        const double beta = betas[bi];
        RngStream rng(cfg.seed, bi);
        std::vector<double> y(draws);
        for (int i = 0; i < draws; ++i) y[i] = sample_y_beta(beta, rng).value;
        for (int k = 1; k <= 3; ++k) {
            double s = 0.0, s2 = 0.0;
            for (double v : y) {
                const double p = std::pow(v, k);
                s += p;
                s2 += p * p;
            }
            const double mean = s / draws;
            const double var = std::max(s2 / draws - mean * mean, 0.0);
            const double se = std::sqrt(var / draws);
            const double target = std::tgamma(k + 1.0) / std::tgamma(beta * k + 1.0);
            gates.upper("empirical_moment_b" + fmt(beta) + "_k" + std::to_string(k),
                        std::abs(mean - target), 4.0 * se, "N=" + std::to_string(draws));
            csv.row({fmt(beta), std::to_string(k), "monte_carlo", fmt(mean), fmt(target),
                     fmt(4.0 * se)});
        }
    }

    res.gates = gates.gates;
    return res;
}

// ---------------------------------------------------------------------------
// gbm-law
// ---------------------------------------------------------------------------

ExperimentResult run_gbm_law(const ExperimentConfig& cfg) {
    ExperimentResult res;
    GateList gates;
    const int n_paths = cfg.replicas > 0 ? cfg.replicas : 100000;
    const std::vector<GreyParams> pairs = {GreyParams(1.0, 1.0), GreyParams(1.2, 0.6),
                                           GreyParams(0.8, 0.5)};
    const int workers = effective_workers(cfg);

    CsvWriter csv(cfg.write_csv ? cfg.out_dir : std::string(), "gbm_law.csv", "alpha,beta,check,value,target,tolerance",
                  &res.artifacts);

    const TimeGrid grid(1.0, 17, 0.0);
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
        const GreyParams& params = pairs[pi];
        const FbmGenerator fbm(params.hurst(), grid);
        std::vector<double> end(n_paths);
        detail::parallel_for(n_paths, workers, [&](int r) {
            RngStream rng(cfg.seed + pi, static_cast<std::uint64_t>(r));
            SamplePath path = generate_gbm(params, fbm, rng);
            end[r] = path.values.back();
        });

        for (int n = 1; n <= 2; ++n) {
            double s = 0.0, s2 = 0.0;
            for (double v : end) {
                const double p = std::pow(v, 2 * n);
                s += p;
                s2 += p * p;
            }
            const double mean = s / n_paths;
            const double se =
                std::sqrt(std::max(s2 / n_paths - mean * mean, 0.0) / n_paths);
            const double target = even_moment(params, n, 1.0);
            gates.upper("moment" + std::to_string(2 * n) + "_a" + fmt(params.alpha) + "_b" +
                            fmt(params.beta),
                        std::abs(mean - target), 4.0 * se, "N=" + std::to_string(n_paths));
            csv.row({fmt(params.alpha), fmt(params.beta), "moment" + std::to_string(2 * n),
                     fmt(mean), fmt(target), fmt(4.0 * se)});
        }
    }

    // Subordinated marginal samplers against the mixture representation at
    // t = 1, two-sample KS at the 1% level.
    {
        const GreyParams params(1.2, 0.6);
        const double t = 1.0;
        const int n_ks = n_paths;
        std::vector<double> mixture(n_ks);
        RngStream rng_mix(cfg.seed + 101, 0);
        const double t_half_alpha = std::pow(t, 0.5 * params.alpha);
        for (int i = 0; i < n_ks; ++i)
            mixture[i] = std::sqrt(sample_y_beta(params.beta, rng_mix).value) * t_half_alpha *
                         rng_mix.normal();
        EmpiricalLaw mix_law(std::move(mixture));

        const std::pair<SubordinationVariant, std::string> variants[] = {
            {SubordinationVariant::bm_inverse_subordinator, "bm_inverse_subordinator"},
            {SubordinationVariant::fbm_d_beta, "fbm_d_beta"}};
        int vi = 0;
        for (const auto& [variant, vname] : variants) {
            std::vector<double> sub(n_ks);
            RngStream rng(cfg.seed + 202 + vi, 0);
            for (int i = 0; i < n_ks; ++i)
                sub[i] = sample_gbm_marginal_subordinated(params, t, variant, rng);
            EmpiricalLaw sub_law(std::move(sub));
            const double d = EmpiricalLaw::ks_two_sample(sub_law, mix_law);
            const double crit = EmpiricalLaw::ks_critical_two_sample(n_ks, n_ks, 0.01);
            gates.upper("ks_" + vname, d, crit, "two-sample vs mixture at t=1");
            csv.row({fmt(params.alpha), fmt(params.beta), "ks_" + vname, fmt(d), "0",
                     fmt(crit)});
            ++vi;
        }
    }

    res.gates = gates.gates;
    return res;
}

// ---------------------------------------------------------------------------
// cpsi
// ---------------------------------------------------------------------------

// Independent brute-force oracle: 2D composite midpoint rule on the axes-
// aligned lattice (cell edges on u=0 and v=0 so the slope sign changes never
// straddle a cell).
double cpsi_quadrature_reference(const Kernel& kernel, double alpha, int panels) {
    const double h = 2.0 / panels;
    double s = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double u = -1.0 + (i + 0.5) * h;
        const double ru = kernel.density(u);
        if (ru == 0.0) continue;
        double inner = 0.0;
        for (int j = 0; j < panels; ++j) {
            const double v = -1.0 + (j + 0.5) * h;
            inner += kernel.density(v) * std::pow(std::abs(u - v), alpha);
        }
        s += ru * inner;
    }
    s *= h * h;
    return std::sqrt(-0.5 * s);
}

ExperimentResult run_cpsi(const ExperimentConfig& cfg) {
    ExperimentResult res;
    GateList gates;
    CsvWriter csv(cfg.write_csv ? cfg.out_dir : std::string(), "cpsi.csv", "kernel,alpha,value,reference,abs_err",
                  &res.artifacts);

    const Kernel rect = rectangular_kernel();
    for (double alpha : {0.5, 1.0, 1.5}) {
        const double v = c_psi(rect, alpha);
        const double ref = std::pow(2.0, 0.5 * (alpha - 2.0));
        gates.upper("rect_alpha" + fmt(alpha), std::abs(v - ref), 1e-12);
        csv.row({"rect", fmt(alpha), fmt(v), fmt(ref), fmt(std::abs(v - ref))});
    }

    const Kernel tri = triangular_kernel();
    for (double alpha : {1.0, 1.5}) {
        const double v = c_psi(tri, alpha);
        const double ref = cpsi_quadrature_reference(tri, alpha, 4096);
        gates.upper("triangle_alpha" + fmt(alpha), std::abs(v - ref), 1e-6);
        csv.row({"triangle", fmt(alpha), fmt(v), fmt(ref), fmt(std::abs(v - ref))});
    }

    res.gates = gates.gates;
    return res;
}

// ---------------------------------------------------------------------------
// berman
// ---------------------------------------------------------------------------

// Independent 2D adaptive quadrature of |t-s|^{-alpha/2} over the unit
// square; the inner integral runs in the lag variable so the singularity
// sits at 0 where the floating grid is dense.
double berman_quadrature_reference(double alpha) {
    auto outer = [&](double t) {
        auto inner = [&](double w) { return std::pow(w, -0.5 * alpha); };
        return integrate(inner, 0.0, t, 5e-9).value +
               integrate(inner, 0.0, 1.0 - t, 5e-9).value;
    };
    return integrate(outer, 0.0, 1.0, 1e-7).value;
}

ExperimentResult run_berman(const ExperimentConfig& cfg) {
    ExperimentResult res;
    GateList gates;
    CsvWriter csv(cfg.write_csv ? cfg.out_dir : std::string(), "berman.csv", "alpha,beta,quantity,value,reference",
                  &res.artifacts);

    for (double alpha : {0.5, 1.0, 1.5}) {
        const double closed = berman_time_integral(alpha);
        const double quad = berman_quadrature_reference(alpha);
        gates.upper("time_integral_alpha" + fmt(alpha), std::abs(closed - quad), 1e-6);
        csv.row({fmt(alpha), "", "time_integral", fmt(closed), fmt(quad)});
    }

    for (double alpha : {0.5, 1.0, 1.5}) {
        for (double beta : {0.3, 0.6, 1.0}) {
            const double v = berman_existence_value(GreyParams(alpha, beta));
            gates.boolean("existence_finite_a" + fmt(alpha) + "_b" + fmt(beta),
                          std::isfinite(v) && v > 0.0, "value " + fmt(v));
            csv.row({fmt(alpha), fmt(beta), "existence_value", fmt(v), ""});
        }
    }

    // The configured pair, echoed for the CLI.
    const double own = berman_existence_value(GreyParams(cfg.alpha, cfg.beta));
    res.notes.push_back("existence value (alpha=" + fmt(cfg.alpha) + ", beta=" + fmt(cfg.beta) +
                        "): " + fmt(own));

    res.gates = gates.gates;
    return res;
}

// ---------------------------------------------------------------------------
// occupation
// ---------------------------------------------------------------------------

ExperimentResult run_occupation(const ExperimentConfig& cfg) {
    ExperimentResult res;
    GateList gates;
    const GreyParams params(cfg.alpha, cfg.beta);
    const int n = cfg.grid_n > 0 ? cfg.grid_n : 4097;
    const double eps = cfg.eps_ladder.empty() ? cfg.horizon / 16.0 : cfg.eps_ladder.front();
    const TimeGrid grid(cfg.horizon, n, grid_extension(cfg, eps));

    RngStream rng(cfg.seed, 0);
    SamplePath path = generate_gbm(params, grid, rng);
    std::span<const double> core(path.values.data() + grid.core_begin(),
                                 static_cast<std::size_t>(grid.n));

    OccupationDensity occ = occupation_density(core, grid.delta);
    gates.upper("mass_conservation", std::abs(occ.total_mass() - cfg.horizon), 1e-9);

    CsvWriter density_csv(cfg.write_csv ? cfg.out_dir : std::string(), "occupation_density.csv", "x,density",
                          &res.artifacts);
    for (std::size_t b = 0; b + 1 < occ.bin_edges.size(); ++b)
        density_csv.row({fmt(0.5 * (occ.bin_edges[b] + occ.bin_edges[b + 1])),
                         fmt(occ.density[b])});

    // Banach-Kac identity on the regularized (piecewise-linear) path, f == 1.
    RegularizedPath reg = regularize_path(path, load_kernel(cfg.kernel), eps);
    auto one = [](double) { return 1.0; };
    const double bk = banach_kac_functional(reg, one);
    const auto [mn, mx] = std::minmax_element(reg.values.begin(), reg.values.end());
    std::vector<double> edges(513);
    for (int b = 0; b <= 512; ++b) edges[b] = *mn + (*mx - *mn) * b / 512.0;
    const double level_side = crossings_level_integral(reg.values, edges, one);
    gates.upper("banach_kac_relative", std::abs(level_side - bk) / std::abs(bk), 1e-8);

    CsvWriter crossings_csv(cfg.write_csv ? cfg.out_dir : std::string(), "crossing_curve.csv", "x,count",
                            &res.artifacts);
    for (int b = 0; b < 512; ++b) {
        const double x = 0.5 * (edges[b] + edges[b + 1]);
        crossings_csv.row({fmt(x), std::to_string(count_crossings(reg.values, x).count)});
    }

    // Occupation-formula gap for f = cos, bounded by Lip(f) * (w/2 + max
    // segment oscillation) * |I|.
    auto f_cos = [](double x) { return std::cos(x); };
    const OccupationFormulaCheck chk = occupation_formula_check(core, grid.delta, f_cos);
    double max_seg = 0.0;
    for (std::size_t i = 0; i + 1 < core.size(); ++i)
        max_seg = std::max(max_seg, std::abs(core[i + 1] - core[i]));
    const double w_max = (occ.bin_edges.back() - occ.bin_edges.front()) /
                         static_cast<double>(occ.density.size());
    const double bound = (0.5 * w_max + max_seg) * cfg.horizon;
    gates.upper("occupation_formula_cos_gap", std::abs(chk.lhs - chk.rhs), bound,
                "lhs " + fmt(chk.lhs) + " rhs " + fmt(chk.rhs));

    res.notes.push_back("realized Y: " + fmt(path.mixing->value));
    res.gates = gates.gates;
    return res;
}

// ---------------------------------------------------------------------------
// crossings-lt
// ---------------------------------------------------------------------------

ExperimentResult run_crossings_lt(const ExperimentConfig& cfg) {
    ExperimentResult res;
    GateList gates;
    const GreyParams params(cfg.alpha, cfg.beta);
    const int n = cfg.grid_n > 0 ? cfg.grid_n : 4097;
    const int replicas = cfg.replicas > 0 ? cfg.replicas : 50;
    std::vector<double> ladder = cfg.eps_ladder;
    if (ladder.empty())
        ladder = parse_eps_ladder("2^-4..2^-7", cfg.horizon);
    const double max_eps = *std::max_element(ladder.begin(), ladder.end());
    const TimeGrid grid(cfg.horizon, n, grid_extension(cfg, max_eps));
    const Kernel kernel = load_kernel(cfg.kernel);
    auto one = [](double) { return 1.0; };
    const int workers = effective_workers(cfg);

    std::vector<std::vector<double>> rel_gap(ladder.size(), std::vector<double>(replicas));
    std::vector<std::vector<double>> scaled(ladder.size(), std::vector<double>(replicas));
    std::vector<std::vector<double>> target(ladder.size(), std::vector<double>(replicas));
    std::vector<double> ys(replicas);

    const FbmGenerator fbm(params.hurst(), grid);
    detail::parallel_for(replicas, workers, [&](int r) {
        RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));
        SamplePath path = generate_gbm(params, fbm, rng);
        ys[r] = path.mixing->value;
        for (std::size_t e = 0; e < ladder.size(); ++e) {
            const CrossingsLocalTime c = crossings_local_time_approx(path, kernel, ladder[e], one);
            scaled[e][r] = c.scaled_crossings;
            target[e][r] = c.target;
            rel_gap[e][r] = std::abs(c.scaled_crossings - c.target) / std::abs(c.target);
        }
    });

    CsvWriter csv(cfg.write_csv ? cfg.out_dir : std::string(), "crossings_lt.csv", "replica,y,eps,scaled_crossings,target,rel_gap",
                  &res.artifacts);
    for (int r = 0; r < replicas; ++r)
        for (std::size_t e = 0; e < ladder.size(); ++e)
            csv.row({std::to_string(r), fmt(ys[r]), fmt(ladder[e]), fmt(scaled[e][r]),
                     fmt(target[e][r]), fmt(rel_gap[e][r])});

    // Ladder ordered from the largest eps to the smallest: the median gap
    // must decrease monotonically and finish below 10%.
    std::vector<std::size_t> order(ladder.size());
    for (std::size_t e = 0; e < order.size(); ++e) order[e] = e;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return ladder[a] > ladder[b]; });
    std::vector<double> medians;
    for (std::size_t e : order) medians.push_back(median(rel_gap[e]));
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < medians.size(); ++i)
        if (!(medians[i + 1] < medians[i])) monotone = false;
    std::string curve;
    for (double m : medians) curve += fmt(m) + " ";
    gates.boolean("median_gap_monotone_decreasing", monotone, "medians " + curve);
    gates.upper("median_gap_at_smallest_eps", medians.back(), 0.10);

    res.gates = gates.gates;
    return res;
}

// ---------------------------------------------------------------------------
// increment-law (t-occupation law of Z) and regularized-law (of Z-tilde)
// ---------------------------------------------------------------------------

ExperimentResult run_increment_law(const ExperimentConfig& cfg, bool regularized) {
    ExperimentResult res;
    GateList gates;
    const GreyParams params(cfg.alpha, cfg.beta);
    const int n = cfg.grid_n > 0 ? cfg.grid_n : 1025;
    const TimeGrid grid(cfg.horizon, n, grid_extension(cfg, cfg.horizon / (n - 1)));
    const double eps = grid.delta;
    const int replicas = cfg.replicas > 0 ? cfg.replicas : 5;
    const Kernel kernel = load_kernel(cfg.kernel);
    const double cpsi_value = regularized ? c_psi(kernel, params.alpha) : 1.0;
    const int workers = effective_workers(cfg);

    std::vector<double> ks(replicas), ys(replicas), var_ratio(replicas);
    const FbmGenerator fbm(params.hurst(), grid);
    detail::parallel_for(replicas, workers, [&](int r) {
        RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));
        SamplePath path = generate_gbm(params, fbm, rng);
        const double y = path.mixing->value;
        ys[r] = y;

        std::vector<double> z;
        double sigma; // conditional standard deviation of the sample
        if (regularized) {
            RegularizedPath reg = regularize_path(path, kernel, eps);
            z = z_tilde(reg, params.alpha);
            sigma = cpsi_value * std::sqrt(y);
        } else {
            z = z_increments(path, eps);
            sigma = std::sqrt(y);
        }

        double ss = 0.0;
        for (double v : z) ss += v * v;
        var_ratio[r] = (ss / static_cast<double>(z.size())) / (sigma * sigma);

        // Studentized sample against the standard Gaussian; a neighborhood
        // of 0 is excluded (the pointwise statement requires x != 0).
        for (double& v : z) v /= sigma;
        EmpiricalLaw law(std::move(z));
        ks[r] = law.ks_distance([](double x) { return gaussian_cdf(x); }, -0.05, 0.05);
    });

    CsvWriter csv(cfg.write_csv ? cfg.out_dir : std::string(), regularized ? "regularized_law.csv" : "increment_law.csv",
                  "replica,y,ks_distance,var_ratio", &res.artifacts);
    for (int r = 0; r < replicas; ++r)
        csv.row({std::to_string(r), fmt(ys[r]), fmt(ks[r]), fmt(var_ratio[r])});

    const double crit = EmpiricalLaw::ks_critical_one_sample(static_cast<std::size_t>(n), 0.01);
    gates.upper("conditional_ks_median", median(ks), 1.5 * crit,
                "eps = spacing = " + fmt(eps) + ", n = " + std::to_string(n));
    if (regularized) {
        double mean_ratio = 0.0;
        for (double v : var_ratio) mean_ratio += v;
        mean_ratio /= replicas;
        gates.window("conditional_variance_ratio", mean_ratio, 0.85, 1.15,
                     "Var(Z~)/(C_psi^2 Y) averaged over replicas");
    }

    res.gates = gates.gates;
    return res;
}

// ---------------------------------------------------------------------------
// moment-conv, lp-moduli, squared-moduli, odd-squared
// ---------------------------------------------------------------------------

ExperimentResult run_moment_conv(const ExperimentConfig& cfg) {
    ExperimentResult res;
    GateList gates;
    const GreyParams params(cfg.alpha, cfg.beta);
    const int k = cfg.k > 0 ? cfg.k : 2;
    const int n = cfg.grid_n > 0 ? cfg.grid_n : 4097;
    const int replicas = cfg.replicas > 0 ? cfg.replicas : 200;
    std::vector<double> ladder =
        cfg.eps_ladder.empty() ? parse_eps_ladder("2^-5..2^-9", cfg.horizon) : cfg.eps_ladder;
    const double max_eps = *std::max_element(ladder.begin(), ladder.end());
    const TimeGrid grid(cfg.horizon, n, grid_extension(cfg, max_eps));

    MomentConvergenceResult mc = moment_convergence_experiment(
        params, k, cfg.t_upper, ladder, grid, replicas, cfg.seed, effective_workers(cfg));

    CsvWriter csv(cfg.write_csv ? cfg.out_dir : std::string(), "moment_conv.csv", "eps,replica,value,target,y",
                  &res.artifacts);
    for (std::size_t e = 0; e < ladder.size(); ++e)
        for (int r = 0; r < replicas; ++r)
            csv.row({fmt(ladder[e]), std::to_string(r), fmt(mc.table.value[e][r]),
                     fmt(mc.table.target[e][r]), fmt(mc.table.mixing_y[r])});
    CsvWriter rms_csv(cfg.write_csv ? cfg.out_dir : std::string(), "moment_conv_rms.csv", "eps,rms_gap",
                      &res.artifacts);
    for (std::size_t e = 0; e < ladder.size(); ++e)
        rms_csv.row({fmt(ladder[e]), fmt(mc.rms_gap[e])});

    gates.window("rms_gap_exponent", mc.fitted_exponent, 0.4, 0.7,
                 "k=" + std::to_string(k) + ", N=" + std::to_string(replicas));
    res.gates = gates.gates;
    return res;
}

ExperimentResult run_lp_moduli(const ExperimentConfig& cfg) {
    ExperimentResult res;
    GateList gates;
    const GreyParams params(cfg.alpha, cfg.beta);
    const double p = cfg.p > 0.0 ? cfg.p : 1.0;
    const int n = cfg.grid_n > 0 ? cfg.grid_n : 4097;
    const int replicas = cfg.replicas > 0 ? cfg.replicas : 1;
    std::vector<double> ladder =
        cfg.eps_ladder.empty() ? parse_eps_ladder("2^-5..2^-9", cfg.horizon) : cfg.eps_ladder;
    const double max_eps = *std::max_element(ladder.begin(), ladder.end());
    const TimeGrid grid(cfg.horizon, n, grid_extension(cfg, max_eps));

    EpsReplicaTable table = lp_moduli_experiment(params, p, cfg.t_upper, ladder, grid, replicas,
                                                 cfg.seed, effective_workers(cfg));

    CsvWriter csv(cfg.write_csv ? cfg.out_dir : std::string(), "lp_moduli.csv", "eps,replica,y,value,target,rel_gap",
                  &res.artifacts);
    std::size_t smallest = 0;
    for (std::size_t e = 0; e < ladder.size(); ++e) {
        if (ladder[e] < ladder[smallest]) smallest = e;
        for (int r = 0; r < replicas; ++r) {
            const double rel =
                std::abs(table.value[e][r] - table.target[e][r]) / std::abs(table.target[e][r]);
            csv.row({fmt(ladder[e]), std::to_string(r), fmt(table.mixing_y[r]),
                     fmt(table.value[e][r]), fmt(table.target[e][r]), fmt(rel)});
        }
    }
    const double rel0 = std::abs(table.value[smallest][0] - table.target[smallest][0]) /
                        std::abs(table.target[smallest][0]);
    gates.upper("rel_gap_at_smallest_eps", rel0, 0.05, "p=" + fmt(p) + ", single path");
    res.gates = gates.gates;
    return res;
}

ExperimentResult run_squared_moduli(const ExperimentConfig& cfg) {
    ExperimentResult res;
    GateList gates;
    const GreyParams params(cfg.alpha, cfg.beta);
    const double p = cfg.p > 0.0 ? cfg.p : 1.0;
    const int n = cfg.grid_n > 0 ? cfg.grid_n : 4097;
    const int replicas = cfg.replicas > 0 ? cfg.replicas : 40;
    std::vector<double> ladder =
        cfg.eps_ladder.empty() ? parse_eps_ladder("2^-5..2^-9", cfg.horizon) : cfg.eps_ladder;
    const double max_eps = *std::max_element(ladder.begin(), ladder.end());
    const TimeGrid grid(cfg.horizon, n, grid_extension(cfg, max_eps));

    EpsReplicaTable table = squared_moduli_experiment(params, p, cfg.t_upper, ladder, grid,
                                                      replicas, cfg.seed, effective_workers(cfg));

    CsvWriter csv(cfg.write_csv ? cfg.out_dir : std::string(), "squared_moduli.csv", "eps,replica,y,value,target,rel_gap",
                  &res.artifacts);
    std::vector<std::size_t> order(ladder.size());
    for (std::size_t e = 0; e < order.size(); ++e) order[e] = e;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return ladder[a] > ladder[b]; });

    std::vector<double> medians;
    for (std::size_t e = 0; e < ladder.size(); ++e)
        for (int r = 0; r < replicas; ++r) {
            const double rel =
                std::abs(table.value[e][r] - table.target[e][r]) / std::abs(table.target[e][r]);
            csv.row({fmt(ladder[e]), std::to_string(r), fmt(table.mixing_y[r]),
                     fmt(table.value[e][r]), fmt(table.target[e][r]), fmt(rel)});
        }
    for (std::size_t e : order) {
        std::vector<double> rels(replicas);
        for (int r = 0; r < replicas; ++r)
            rels[r] = std::abs(table.value[e][r] - table.target[e][r]) /
                      std::abs(table.target[e][r]);
        medians.push_back(median(rels));
    }
    // Trend gate: the fitted slope of log(median gap) against log(eps) must
    // be clearly positive and the smallest-eps median below the largest-eps
    // one (per-rung strict ordering would be Monte Carlo noise at this N).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < medians.size(); ++i) {
        const double x = std::log(ladder[order[i]]);
        const double y = std::log(std::max(medians[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(medians.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    std::string curve;
    for (double v : medians) curve += fmt(v) + " ";
    gates.window("median_gap_trend_slope", slope, 0.15, 10.0, "medians " + curve);
    gates.boolean("median_gap_endpoints", medians.back() < medians.front(),
                  "smallest-eps median below largest-eps median");
    res.gates = gates.gates;
    return res;
}

ExperimentResult run_odd_squared(const ExperimentConfig& cfg) {
    ExperimentResult res;
    GateList gates;
    const GreyParams params(cfg.alpha, cfg.beta);
    const int k = cfg.k > 0 ? cfg.k : 3;
    const int n = cfg.grid_n > 0 ? cfg.grid_n : 4097;
    const int replicas = cfg.replicas > 0 ? cfg.replicas : 100;
    std::vector<double> ladder =
        cfg.eps_ladder.empty() ? parse_eps_ladder("2^-5..2^-9", cfg.horizon) : cfg.eps_ladder;
    const double max_eps = *std::max_element(ladder.begin(), ladder.end());
    const TimeGrid grid(cfg.horizon, n, grid_extension(cfg, max_eps));

    EpsReplicaTable table = odd_squared_moment_experiment(
        params, k, cfg.t_upper, ladder, grid, replicas, cfg.seed, effective_workers(cfg));

    CsvWriter csv(cfg.write_csv ? cfg.out_dir : std::string(), "odd_squared.csv", "eps,replica,y,value",
                  &res.artifacts);
    std::size_t smallest = 0, largest = 0;
    for (std::size_t e = 0; e < ladder.size(); ++e) {
        if (ladder[e] < ladder[smallest]) smallest = e;
        if (ladder[e] > ladder[largest]) largest = e;
        for (int r = 0; r < replicas; ++r)
            csv.row({fmt(ladder[e]), std::to_string(r), fmt(table.mixing_y[r]),
                     fmt(table.value[e][r])});
    }
    int decayed = 0;
    for (int r = 0; r < replicas; ++r)
        if (std::abs(table.value[smallest][r]) < std::abs(table.value[largest][r])) ++decayed;
    const double fraction = static_cast<double>(decayed) / replicas;
    GateResult g{"decay_fraction", fraction >= 0.9, fraction, 0.9,
                 "|value| smaller at eps=" + fmt(ladder[smallest]) + " than at eps=" +
                     fmt(ladder[largest])};
    gates.gates.push_back(g);
    res.gates = gates.gates;
    return res;
}

// ---------------------------------------------------------------------------
// power-variation
// ---------------------------------------------------------------------------

ExperimentResult run_power_variation(const ExperimentConfig& cfg) {
    ExperimentResult res;
    GateList gates;
    const int workers = effective_workers(cfg);

    CsvWriter csv(cfg.write_csv ? cfg.out_dir : std::string(), "power_variation.csv",
                  "case,k,alpha,beta,scaling,n,replica,value,y,note",
                  &res.artifacts);

    struct CaseSpec {
        std::string label;
        int k;
        double alpha;
        double beta;
        PvScaling scaling;
        bool centered;
        int n_grid;
        int replicas;
        std::string note;
    };
    const std::vector<CaseSpec> cases = {
        {"bm_k2", 2, 1.0, 1.0, PvScaling::sqrt_n, true, 1025, 2000, ""},
        {"case1", 2, 1.2, 0.6, PvScaling::sqrt_n, true, 16385, 2000, ""},
        {"case2_rosenblatt", 2, 1.8, 0.6, PvScaling::n_one_minus_alpha, true, 4097, 200,
         "recorded only; no distributional gate"},
        {"case3", 3, 0.6, 0.6, PvScaling::sqrt_n, false, 4097, 500, ""},
        {"case4_verbatim", 2, 1.6, 0.6, PvScaling::n_neg_alpha_half, false, 4097, 200,
         "display labels k even but matches the odd-k pattern; computed verbatim"},
        {"case4_odd_k", 3, 1.6, 0.6, PvScaling::n_neg_alpha_half, false, 4097, 200,
         "odd-k companion of the verbatim case"},
    };

    std::map<std::string, std::vector<double>> stats_by_case;
    std::map<std::string, std::vector<double>> y_by_case;

    for (const auto& c : cases) {
        const GreyParams params(c.alpha, c.beta);
        const TimeGrid grid(1.0, c.n_grid, 0.0);
        const FbmGenerator fbm(params.hurst(), grid);
        const int replicas = cfg.replicas > 0 ? cfg.replicas : c.replicas;
        std::vector<double> vals(replicas), ys(replicas);
        detail::parallel_for(replicas, workers, [&](int r) {
            RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));
            SamplePath path = generate_gbm(params, fbm, rng);
            const PowerVariationResult pv = power_variation(path, c.k, c.scaling, c.centered);
            vals[r] = pv.value;
            ys[r] = pv.mixing_y;
        });
        for (int r = 0; r < replicas; ++r)
            csv.row({c.label, std::to_string(c.k), fmt(c.alpha), fmt(c.beta),
                     c.scaling == PvScaling::sqrt_n
                         ? "sqrt_n"
                         : (c.scaling == PvScaling::n_one_minus_alpha ? "n_pow_1_minus_alpha"
                                                                      : "n_pow_neg_alpha_half"),
                     std::to_string(c.n_grid - 1), std::to_string(r), fmt(vals[r]), fmt(ys[r]),
                     c.note});
        stats_by_case[c.label] = std::move(vals);
        y_by_case[c.label] = std::move(ys);
        if (!c.note.empty()) res.notes.push_back(c.label + ": " + c.note);
    }

    // Brownian k=2 benchmark: the centered statistic has variance 2.
    {
        const auto& v = stats_by_case["bm_k2"];
        double s = 0.0, s2 = 0.0;
        for (double x : v) {
            s += x;
            s2 += x * x;
        }
        const double var = s2 / v.size() - (s / v.size()) * (s / v.size());
        gates.window("bm_k2_variance", var, 2.0 * 0.9, 2.0 * 1.1, "target 2 within 10%");
    }

    // Case-1 normality gate: studentize by Y^{k/2} and check the shape.
    {
        std::vector<double> u(stats_by_case["case1"].size());
        for (std::size_t i = 0; i < u.size(); ++i)
            u[i] = stats_by_case["case1"][i] / y_by_case["case1"][i]; // k = 2: Y^{k/2} = Y
        EmpiricalLaw law(std::move(u));
        gates.upper("case1_abs_skewness", std::abs(law.skewness()), 0.15);
        gates.upper("case1_abs_excess_kurtosis", std::abs(law.excess_kurtosis()), 0.3);
    }

    res.gates = gates.gates;
    return res;
}

// ---------------------------------------------------------------------------
// brownian-limit
// ---------------------------------------------------------------------------

ExperimentResult run_brownian_limit(const ExperimentConfig& cfg) {
    ExperimentResult res;
    GateList gates;
    const double alpha = cfg.alpha < 1.0 ? cfg.alpha : 0.6;
    const double beta = cfg.alpha < 1.0 ? cfg.beta : 0.8;
    const GreyParams params(alpha, beta);
    const int k = cfg.k > 0 ? cfg.k : 3;
    // The limit variance is approached like eps^{1-alpha} (the rank-1 lag
    // integral vanishes only in the limit), so the studentized KS gate needs
    // a small default epsilon.
    const int n = cfg.grid_n > 0 ? cfg.grid_n : 65537;
    const int replicas = cfg.replicas > 0 ? cfg.replicas : 1000;
    const double eps =
        cfg.eps_ladder.empty() ? cfg.horizon * std::pow(2.0, -13) : cfg.eps_ladder.front();
    const TimeGrid grid(cfg.horizon, n, grid_extension(cfg, eps));

    BrownianLimitResult bl = brownian_limit_experiment(params, k, cfg.t_upper, eps, grid, replicas,
                                                       cfg.seed, effective_workers(cfg));
    // The half-horizon marginal of the same replicas, for the variance
    // scaling check Var(t) = c Y^k t.
    BrownianLimitResult bl_half = brownian_limit_experiment(
        params, k, 0.5 * cfg.t_upper, eps, grid, replicas, cfg.seed, effective_workers(cfg));

    CsvWriter csv(cfg.write_csv ? cfg.out_dir : std::string(), "brownian_limit.csv", "replica,y,statistic,statistic_half_t",
                  &res.artifacts);
    for (int r = 0; r < replicas; ++r)
        csv.row({std::to_string(r), fmt(bl.mixing_y[r]), fmt(bl.statistic[r]),
                 fmt(bl_half.statistic[r])});

    // Studentized marginal: divide by sqrt(c Y^k t); limit is standard normal.
    std::vector<double> u(replicas);
    for (int r = 0; r < replicas; ++r)
        u[r] = bl.statistic[r] /
               std::sqrt(bl.c_value * std::pow(bl.mixing_y[r], k) * cfg.t_upper);
    EmpiricalLaw law(std::move(u));
    const double d = law.ks_distance([](double x) { return gaussian_cdf(x); });
    const double crit = EmpiricalLaw::ks_critical_one_sample(static_cast<std::size_t>(replicas),
                                                             0.01);
    gates.upper("studentized_ks", d, crit,
                "c_{k,alpha} = " + fmt(bl.c_value) + ", eps = " + fmt(eps));

    {
        auto var_of = [](const std::vector<double>& v) {
            double s = 0.0, s2 = 0.0;
            for (double x : v) {
                s += x;
                s2 += x * x;
            }
            const double m = s / v.size();
            return s2 / v.size() - m * m;
        };
        // Normalize out the Y mixture before comparing variances in t.
        std::vector<double> a(replicas), b(replicas);
        for (int r = 0; r < replicas; ++r) {
            const double yk = std::sqrt(std::pow(bl.mixing_y[r], k));
            a[r] = bl.statistic[r] / yk;
            b[r] = bl_half.statistic[r] / yk;
        }
        const double ratio = var_of(a) / var_of(b);
        gates.window("variance_scaling_t", ratio, 1.7, 2.3, "Var(t)/Var(t/2)");
    }

    res.gates = gates.gates;
    return res;
}

} // namespace

const std::vector<ExperimentInfo>& experiment_registry() {
    static const std::vector<ExperimentInfo> registry = {
        {"specfun-golden", "(Sec. 1)"},
        {"ml-moments", "(Sec. 1, moment identities)"},
        {"gbm-law", "(Sec. 2)"},
        {"cpsi", "(Thm. 3.5)"},
        {"berman", "(Thm. 4.1)"},
        {"occupation", "(Thm. 4.1)"},
        {"crossings-lt", "(Thm. 4.3)"},
        {"increment-law", "(Thm. 3.3)"},
        {"regularized-law", "(Thm. 3.5)"},
        {"moment-conv", "(Lemma 3.1)"},
        {"lp-moduli", "(Sec. 3.1)"},
        {"squared-moduli", "(Sec. 3.1)"},
        {"odd-squared", "(Appendix A)"},
        {"power-variation", "(Thm. 3.6)"},
        {"brownian-limit", "(Thm. 3.7)"},
    };
    return registry;
}

std::string list_experiments() {
    std::string out;
    for (const auto& e : experiment_registry()) out += e.name + "  " + e.annotation + "\n";
    return out;
}

std::vector<double> parse_eps_ladder(const std::string& spec, double horizon) {
    std::vector<double> ladder;
    const auto dots = spec.find("..");
    if (spec.rfind("2^-", 0) == 0 && dots != std::string::npos) {
        const int a = std::stoi(spec.substr(3, dots - 3));
        const std::string second = spec.substr(dots + 2);
        if (second.rfind("2^-", 0) != 0)
            throw std::invalid_argument("eps ladder: expected 2^-a..2^-b, got '" + spec + "'");
        const int b = std::stoi(second.substr(3));
        if (a > b) throw std::invalid_argument("eps ladder: need a <= b in 2^-a..2^-b");
        for (int e = a; e <= b; ++e) ladder.push_back(horizon * std::pow(2.0, -e));
        return ladder;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        ladder.push_back(std::stod(tok));
    }
    if (ladder.empty()) throw std::invalid_argument("eps ladder: empty specification");
    return ladder;
}

void apply_config_file(ExperimentConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config file not found: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key[0] == '#') continue;
        std::string value;
        std::getline(ls, value);
        const auto first = value.find_first_not_of(" \t=");
        value = (first == std::string::npos) ? "" : value.substr(first);
        while (!value.empty() && (value.back() == ' ' || value.back() == '\t')) value.pop_back();
        if (value.empty())
            throw std::invalid_argument("config file: missing value at line " +
                                        std::to_string(lineno));
        if (key == "experiment") config.name = value;
        else if (key == "alpha") config.alpha = std::stod(value);
        else if (key == "beta") config.beta = std::stod(value);
        else if (key == "horizon") config.horizon = std::stod(value);
        else if (key == "grid-n") config.grid_n = std::stoi(value);
        else if (key == "ext") config.ext = std::stod(value);
        else if (key == "eps-ladder") config.eps_ladder = parse_eps_ladder(value, config.horizon);
        else if (key == "eps") config.eps_ladder = {std::stod(value)};
        else if (key == "kernel") config.kernel = value;
        else if (key == "replicas") config.replicas = std::stoi(value);
        else if (key == "seed") config.seed = std::stoull(value);
        else if (key == "out") config.out_dir = value;
        else if (key == "workers") config.workers = std::stoi(value);
        else if (key == "k") config.k = std::stoi(value);
        else if (key == "p") config.p = std::stod(value);
        else if (key == "t") config.t_upper = std::stod(value);
        else
            throw std::invalid_argument("config file: unknown key '" + key + "' at line " +
                                        std::to_string(lineno));
    }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    const auto& registry = experiment_registry();
    const auto it = std::find_if(registry.begin(), registry.end(),
                                 [&](const ExperimentInfo& e) { return e.name == config.name; });
    if (it == registry.end())
        throw std::invalid_argument("unknown experiment '" + config.name +
                                    "'; run `list` for the available names");
    if (config.replicas < 0) throw std::invalid_argument("replicas must be >= 1");
    for (double e : config.eps_ladder)
        if (!(e > 0.0)) throw std::invalid_argument("eps ladder entries must be > 0");

    const auto t0 = std::chrono::steady_clock::now();
    ExperimentResult res;
    if (config.name == "specfun-golden") res = run_specfun_golden(config);
    else if (config.name == "ml-moments") res = run_ml_moments(config);
    else if (config.name == "gbm-law") res = run_gbm_law(config);
    else if (config.name == "cpsi") res = run_cpsi(config);
    else if (config.name == "berman") res = run_berman(config);
    else if (config.name == "occupation") res = run_occupation(config);
    else if (config.name == "crossings-lt") res = run_crossings_lt(config);
    else if (config.name == "increment-law") res = run_increment_law(config, false);
    else if (config.name == "regularized-law") res = run_increment_law(config, true);
    else if (config.name == "moment-conv") res = run_moment_conv(config);
    else if (config.name == "lp-moduli") res = run_lp_moduli(config);
    else if (config.name == "squared-moduli") res = run_squared_moduli(config);
    else if (config.name == "odd-squared") res = run_odd_squared(config);
    else if (config.name == "power-variation") res = run_power_variation(config);
    else if (config.name == "brownian-limit") res = run_brownian_limit(config);
    res.name = config.name;
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!config.out_dir.empty() && config.write_json) {
        json summary;
        summary["experiment"] = config.name;
        summary["version"] = kVersion;
        summary["wall_seconds"] = res.wall_seconds;
        summary["config"] = {
            {"alpha", config.alpha},     {"beta", config.beta},
            {"horizon", config.horizon}, {"grid_n", config.grid_n},
            {"eps_ladder", config.eps_ladder}, {"kernel", config.kernel},
            {"replicas", config.replicas},     {"seed", config.seed},
            {"k", config.k},             {"p", config.p},
            {"t", config.t_upper},       {"workers", config.workers},
        };
        json gates = json::array();
        for (const auto& g : res.gates)
            gates.push_back({{"name", g.name},
                             {"pass", g.pass},
                             {"value", g.value},
                             {"threshold", g.threshold},
                             {"detail", g.detail}});
        summary["gates"] = gates;
        summary["notes"] = res.notes;
        summary["pass"] = res.all_pass();
        std::filesystem::create_directories(config.out_dir);
        const std::string path = config.out_dir + "/" + config.name + "_summary.json";
        std::ofstream out(path, std::ios::binary);
        out << summary.dump(2) << "\n";
        res.artifacts.push_back(path);
    }
    return res;
}

} // namespace gbm
