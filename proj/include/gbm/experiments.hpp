#ifndef GBM_EXPERIMENTS_HPP
#define GBM_EXPERIMENTS_HPP

// Named, reproducible experiment runner: each experiment reproduces one of
// the convergence statements as a desk-scale Monte Carlo study, emits CSV
// tables plus a JSON summary, and reports pass/fail gates.

#include <cstdint>
#include <string>
#include <vector>

namespace gbm {

struct ExperimentConfig {
    std::string name;
    double alpha = 1.2;
    double beta = 0.6;
    double horizon = 1.0;
    int grid_n = 0;                  // 0: experiment default
    double ext = -1.0;               // < 0: derived from the epsilon ladder
    std::vector<double> eps_ladder;  // absolute values; empty: experiment default
    std::string kernel = "rect";
    int replicas = 0;                // 0: experiment default
    std::uint64_t seed = 1;
    std::string out_dir;             // empty: no files written
    bool write_csv = true;
    bool write_json = true;
    int workers = 0;                 // 0: hardware concurrency
    int k = 0;                       // 0: experiment default
    double p = 0.0;                  // 0: experiment default
    double t_upper = 1.0;
};

struct GateResult {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct ExperimentResult {
    std::string name;
    std::vector<GateResult> gates;
    std::vector<std::string> artifacts;
    std::vector<std::string> notes;
    double wall_seconds = 0.0;

    bool all_pass() const {
        for (const auto& g : gates)
            if (!g.pass) return false;
        return true;
    }
};

struct ExperimentInfo {
    std::string name;
    std::string annotation; // the statement the experiment reproduces
};

const std::vector<ExperimentInfo>& experiment_registry();
std::string list_experiments();

// Throws std::invalid_argument for configuration errors and EvaluationError
// for numerical failures; gate failures are reported, not thrown.
ExperimentResult run_experiment(const ExperimentConfig& config);

// "2^-a..2^-b" expands to {2^-a, ..., 2^-b} * horizon (a <= b); a plain
// comma list of absolute values is also accepted.
std::vector<double> parse_eps_ladder(const std::string& spec, double horizon);

// Flat key/value config file (one `key value` pair per line, '#' comments).
// Sets every field named in the file; callers that support flag overrides
// apply the file first and re-apply explicit flags afterwards.
void apply_config_file(ExperimentConfig& config, const std::string& path);

} // namespace gbm

#endif
