// gbmlab: command-line runner for the grey Brownian motion laboratory.
// Subcommands: eval (special-function point evaluation), sample (variates and
// paths to file), run <experiment>, list. Exit codes: 0 success, 2 config
// error, 3 numerical failure, 4 gate failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gbm/errors.hpp"
#include "gbm/experiments.hpp"
#include "gbm/kernel.hpp"
#include "gbm/paths.hpp"
#include "gbm/rng.hpp"
#include "gbm/sampling.hpp"
#include "gbm/specfun.hpp"
#include "gbm/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitGate = 4;

struct EvalArgs {
    std::string function;
    double alpha = 1.2;
    double beta = 0.6;
    double x = 0.0;
    double t = 1.0;
    int n = 1;
};

int do_eval(const EvalArgs& args) {
    double value = 0.0;
    if (args.function == "ml")
        value = gbm::mittag_leffler(args.beta, args.x);
    else if (args.function == "mwright")
        value = gbm::m_wright_density(args.beta, args.x);
    else if (args.function == "marginal")
        value = gbm::marginal_density(gbm::GreyParams(args.alpha, args.beta), args.x, args.t);
    else if (args.function == "gendens")
        value = gbm::density_generator(args.beta, args.n, args.x);
    else
        throw CLI::ValidationError("eval", "unknown function '" + args.function + "'");
    std::printf("%.15g\n", value);
    return kExitOk;
}

struct SampleArgs {
    std::string kind;
    double alpha = 1.2;
    double beta = 0.6;
    double t = 1.0;
    double x = 1.0;
    int count = 1;
    int grid_n = 1025;
    double horizon = 1.0;
    double ext = 0.0;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    std::string out;
    std::string format = "csv";
};

int do_sample(const SampleArgs& args) {
    gbm::RngStream rng(args.seed, args.stream);
    if (args.kind == "fbm" || args.kind == "gbm") {
        const gbm::TimeGrid grid(args.horizon, args.grid_n, args.ext);
        gbm::SamplePath path =
            args.kind == "fbm"
                ? gbm::generate_fbm(0.5 * args.alpha, grid, rng)
                : gbm::generate_gbm(gbm::GreyParams(args.alpha, args.beta), grid, rng);
        if (args.out.empty()) {
            gbm::write_path_csv(path, std::cout);
        } else if (args.format == "bin") {
            gbm::write_path_binary(path, args.out);
        } else {
            gbm::write_path_csv(path, args.out);
        }
        return kExitOk;
    }

    auto draw = [&]() -> double {
        if (args.kind == "stable") return gbm::sample_stable_subordinator(args.beta, rng);
        if (args.kind == "ybeta") return gbm::sample_y_beta(args.beta, rng).value;
        if (args.kind == "inverse-subordinator")
            return gbm::sample_inverse_subordinator(args.beta, args.x, rng);
        if (args.kind == "dbeta") return gbm::sample_d_beta(args.beta, args.t, rng);
        if (args.kind == "marginal-bm")
            return gbm::sample_gbm_marginal_subordinated(
                gbm::GreyParams(args.alpha, args.beta), args.t,
                gbm::SubordinationVariant::bm_inverse_subordinator, rng);
        if (args.kind == "marginal-fbm")
            return gbm::sample_gbm_marginal_subordinated(
                gbm::GreyParams(args.alpha, args.beta), args.t,
                gbm::SubordinationVariant::fbm_d_beta, rng);
        throw CLI::ValidationError("sample", "unknown kind '" + args.kind + "'");
    };

    std::FILE* out = args.out.empty() ? stdout : std::fopen(args.out.c_str(), "wb");
    if (!out) throw std::runtime_error("cannot open output file " + args.out);
    std::fprintf(out, "value\n");
    for (int i = 0; i < args.count; ++i) std::fprintf(out, "%.17g\n", draw());
    if (out != stdout) std::fclose(out);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"grey Brownian motion laboratory"};
    app.set_version_flag("--version", std::string(gbm::kVersion));
    app.require_subcommand(1);

    // --- eval ---
    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "evaluate a special function at a point");
    eval->add_option("function", eval_args.function, "ml | mwright | marginal | gendens")
        ->required();
    eval->add_option("--alpha", eval_args.alpha, "process alpha (marginal only)");
    eval->add_option("--beta", eval_args.beta, "order beta");
    eval->add_option("--x", eval_args.x, "argument (tau for mwright)")->required();
    eval->add_option("--t", eval_args.t, "time (marginal only)");
    eval->add_option("-n", eval_args.n, "dimension (gendens only)");

    // --- sample ---
    SampleArgs sample_args;
    CLI::App* sample = app.add_subcommand("sample", "draw variates or paths");
    sample
        ->add_option("kind", sample_args.kind,
                     "stable | ybeta | inverse-subordinator | dbeta | marginal-bm | "
                     "marginal-fbm | fbm | gbm")
        ->required();
    sample->add_option("--alpha", sample_args.alpha);
    sample->add_option("--beta", sample_args.beta);
    sample->add_option("--t", sample_args.t, "time argument");
    sample->add_option("--x", sample_args.x, "space argument (inverse-subordinator)");
    sample->add_option("--count", sample_args.count, "number of scalar draws");
    sample->add_option("--grid-n", sample_args.grid_n, "grid points (paths)");
    sample->add_option("--horizon", sample_args.horizon, "time horizon (paths)");
    sample->add_option("--ext", sample_args.ext, "grid extension margin (paths)");
    sample->add_option("--seed", sample_args.seed);
    sample->add_option("--stream", sample_args.stream, "stream id");
    sample->add_option("--out", sample_args.out, "output file (default stdout)");
    sample->add_option("--format", sample_args.format, "csv | bin (paths only)")
        ->check(CLI::IsMember({"csv", "bin"}));

    // --- run ---
    gbm::ExperimentConfig run_cfg;
    std::string config_file, eps_spec, eps_ladder_spec, format_flag = "csv";
    CLI::App* run = app.add_subcommand("run", "run a named experiment");
    auto* name_opt = run->add_option("experiment", run_cfg.name, "experiment name")->required();
    auto* alpha_opt = run->add_option("--alpha", run_cfg.alpha);
    auto* beta_opt = run->add_option("--beta", run_cfg.beta);
    auto* horizon_opt = run->add_option("--horizon", run_cfg.horizon);
    auto* gridn_opt = run->add_option("--grid-n", run_cfg.grid_n);
    auto* ext_opt = run->add_option("--ext", run_cfg.ext);
    auto* eps_opt = run->add_option("--eps", eps_spec, "single epsilon");
    auto* ladder_opt =
        run->add_option("--eps-ladder", eps_ladder_spec, "ladder, e.g. 2^-4..2^-7");
    auto* kernel_opt = run->add_option("--kernel", run_cfg.kernel, "kernel name or file");
    auto* replicas_opt = run->add_option("--replicas", run_cfg.replicas);
    auto* seed_opt = run->add_option("--seed", run_cfg.seed);
    auto* out_opt = run->add_option("--out", run_cfg.out_dir, "output directory");
    auto* workers_opt = run->add_option("--workers", run_cfg.workers);
    auto* k_opt = run->add_option("-k,--k", run_cfg.k);
    auto* p_opt = run->add_option("-p,--p", run_cfg.p);
    auto* t_opt = run->add_option("--t", run_cfg.t_upper);
    auto* format_opt =
        run->add_option("--format", format_flag)->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--config", config_file, "flat key/value config file (flags win)");

    // --- list ---
    CLI::App* list = app.add_subcommand("list", "list experiments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (eval->parsed()) return do_eval(eval_args);
        if (sample->parsed()) return do_sample(sample_args);
        if (list->parsed()) {
            std::cout << gbm::list_experiments();
            return kExitOk;
        }
        if (run->parsed()) {
            if (!config_file.empty()) {
                // Flags win over file values: re-apply anything given on the
                // command line after loading the file.
                gbm::ExperimentConfig flags = run_cfg;
                gbm::apply_config_file(run_cfg, config_file);
                if (name_opt->count()) run_cfg.name = flags.name;
                if (alpha_opt->count()) run_cfg.alpha = flags.alpha;
                if (beta_opt->count()) run_cfg.beta = flags.beta;
                if (horizon_opt->count()) run_cfg.horizon = flags.horizon;
                if (gridn_opt->count()) run_cfg.grid_n = flags.grid_n;
                if (ext_opt->count()) run_cfg.ext = flags.ext;
                if (kernel_opt->count()) run_cfg.kernel = flags.kernel;
                if (replicas_opt->count()) run_cfg.replicas = flags.replicas;
                if (seed_opt->count()) run_cfg.seed = flags.seed;
                if (out_opt->count()) run_cfg.out_dir = flags.out_dir;
                if (workers_opt->count()) run_cfg.workers = flags.workers;
                if (k_opt->count()) run_cfg.k = flags.k;
                if (p_opt->count()) run_cfg.p = flags.p;
                if (t_opt->count()) run_cfg.t_upper = flags.t_upper;
            }
            if (ladder_opt->count())
                run_cfg.eps_ladder = gbm::parse_eps_ladder(eps_ladder_spec, run_cfg.horizon);
            else if (eps_opt->count())
                run_cfg.eps_ladder = {std::stod(eps_spec)};
            if (format_opt->count()) {
                run_cfg.write_csv = format_flag == "csv";
                run_cfg.write_json = true;
            }
            if (run_cfg.out_dir.empty()) run_cfg.out_dir = ".";

            const gbm::ExperimentResult res = gbm::run_experiment(run_cfg);
            for (const auto& note : res.notes) std::cout << note << "\n";
            for (const auto& g : res.gates)
                std::printf("[%s] %-40s value %.6g threshold %.6g %s\n",
                            g.pass ? "PASS" : "FAIL", g.name.c_str(), g.value, g.threshold,
                            g.detail.c_str());
            std::printf("%s: %s (%.2fs)\n", res.name.c_str(),
                        res.all_pass() ? "all gates passed" : "GATE FAILURE",
                        res.wall_seconds);
            for (const auto& a : res.artifacts) std::cout << "wrote " << a << "\n";
            return res.all_pass() ? kExitOk : kExitGate;
        }
    } catch (const gbm::EvaluationError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}
