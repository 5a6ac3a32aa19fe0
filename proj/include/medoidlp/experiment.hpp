#ifndef MEDOIDLP_EXPERIMENT_HPP
#define MEDOIDLP_EXPERIMENT_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "medoidlp/model.hpp"

namespace medoidlp {

/// Monte Carlo recovery-grid configuration. Each cell is a combination of
/// (case, d, k, n, R); every cell runs `trials` independent draws.
struct ExperimentConfig {
    std::vector<int> ns{5, 10, 20};
    std::vector<int> ks{2, 3};
    std::vector<double> Rs{2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
    std::vector<int> ds{2, 4};
    std::vector<RadialLaw> cases{RadialLaw::uniform_ball, RadialLaw::quadratic_cdf};
    int trials = 20;
    std::uint64_t base_seed = 1;
    Metric metric = Metric::squared();
    CenterLayout layout = CenterLayout::simplex;
    bool run_certificates = false;
    int threads = 0; // 0 = hardware concurrency; MEDOID_LP_THREADS caps it
    std::string out_dir = "experiment-out";

    /// Desk-scale default grid (the scaled stand-in for the full study).
    static ExperimentConfig default_scaled() { return {}; }
    /// The full grid: 6 x 2 x 16 x 4 x 2 cells at 1000 trials. Hours of
    /// compute; kept behind an explicit flag.
    static ExperimentConfig paper_full();

    int cell_count() const;
    void validate() const; // grid values positive, trials >= 1, N = nk <= 90
};

struct CellResult {
    int case_id = 1; // 1 or 2
    int d = 0;
    int k = 0;
    int n = 0;
    double R = 0.0;
    int trials = 0;
    int fractional = 0;
    int cluster_only = 0;
    int ball = 0;
    int solver_failures = 0;
    bool certificates_run = false;
    int cor3_holds = 0;
    int cor4_holds = 0;
    int prop1_holds = 0;
    double wall_seconds = 0.0; // informational; never part of deterministic reports
};

using ProgressFn = std::function<void(int done_cells, int total_cells)>;

std::vector<CellResult> run_experiment(const ExperimentConfig& cfg, ProgressFn progress = {});

std::string cells_to_csv(const std::vector<CellResult>& cells);
std::string cells_to_json(const std::vector<CellResult>& cells, bool include_timings = false);

/// Writes cells.csv / cells.json / one SVG per (case, d, k) into out_dir.
/// Formats is a comma-free list like {"csv", "json", "svg"}.
std::vector<std::string> emit_report(const std::vector<CellResult>& cells,
                                     const std::vector<std::string>& formats,
                                     const std::string& out_dir);

/// Flat key=value config file; repeated keys extend list-valued settings.
ExperimentConfig parse_experiment_config(const std::string& text,
                                         ExperimentConfig base = ExperimentConfig::default_scaled());

/// Worker-count resolution: cfg.threads (or hardware), capped by the
/// MEDOID_LP_THREADS environment variable when set.
int resolve_thread_count(int requested);

} // namespace medoidlp

#endif
