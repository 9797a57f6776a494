#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sno/optimizer.hpp"
#include "sno/stats.hpp"

namespace sno {

/// One harness invocation: a grid of (problem, dimension) cells, each run for
/// `trials` seeded trials (seed_i = seed_base + trial index).
struct ExperimentSpec {
    std::vector<std::string> problems;
    std::vector<int> dimensions;
    int trials = 30;
    std::uint64_t seed_base = 1;
    std::optional<long long> fes_max;  // unset: per-dimension default
    std::optional<std::pair<double, double>> bounds;
    SnoConfig base_config;
    std::filesystem::path out_dir = ".";
    std::vector<long long> snapshots;
    int jobs = 1;
};

/// Budget convention: 200,000 evaluations below 20 dimensions, 1,000,000 from
/// 20 dimensions up.
long long default_fes_max(int dimension);

/// Applies `key = value` lines ('#' comments allowed) to the spec. Accepts
/// every SnoConfig field plus bounds_lower/bounds_upper; unknown keys throw.
/// n_s_end / n_x_init / n_x_end follow n_s_init (0.2 / 0.1 / 0.2 of it)
/// unless set explicitly.
void apply_config_file(const std::filesystem::path& path, ExperimentSpec& spec);

/// Runs the grid and writes convergence_<f>_<d>_<t>.csv, optional
/// net_<f>_<d>_<t>_<fes>.csv snapshots, and results_<f>_<d>.json per cell.
/// Returns a process exit code; partially written files are removed on
/// failure.
int run_experiment(const ExperimentSpec& spec, std::ostream& out, std::ostream& err);

struct CompareOptions {
    std::vector<std::filesystem::path> result_dirs;
    RankMode console_mode = RankMode::Avg;
    double significance = 0.05;
    bool paired = false;  // signed-rank over seed-paired trials
    std::filesystem::path out_dir = ".";
};

/// Reads results_*.json from each directory (one algorithm per directory),
/// writes ranks.csv and wilcoxon.csv, and prints the per-pair
/// Better/NoDifference/Worse summary.
int run_compare(const CompareOptions& options, std::ostream& out, std::ostream& err);

/// Re-emits a net snapshot's elastic points as whitespace-separated
/// coordinate + objective columns (first two coordinates only beyond 3-D).
int write_snapshot_plotdata(const std::filesystem::path& net_csv, std::ostream& out,
                            std::ostream& err);

/// "%.17g": round-trips doubles losslessly.
std::string format_double(double value);

}  // namespace sno
