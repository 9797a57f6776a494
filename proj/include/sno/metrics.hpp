#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sno/problem.hpp"
#include "sno/spacenet.hpp"

namespace sno {

struct ConvergenceSample {
    long long fes = 0;
    double best_error = 0.0;
    int n_s = 0;
    int n_x = 0;
    double diversity = 0.0;
    double xpl_pct = 0.0;
    double xpt_pct = 0.0;
};

/// State of the net (and the searching populations) at one fes checkpoint.
struct NetSnapshot {
    long long checkpoint = 0;  // requested fes
    long long fes = 0;         // actual capture fes
    std::vector<ElasticPoint> points;
    std::vector<std::vector<double>> explorer_positions;
    std::vector<double> explorer_objectives;
    std::vector<std::vector<double>> miner_positions;
    std::vector<double> miner_objectives;
};

/// Everything one seeded trial produces.
struct RunRecord {
    std::uint64_t seed = 0;
    long long fes_used = 0;
    long long iterations = 0;
    double final_objective = 0.0;
    double final_error = 0.0;
    std::vector<double> best_point;
    std::array<long long, kEvalPhaseCount> eval_counts{};
    std::vector<ConvergenceSample> samples;
    std::vector<NetSnapshot> snapshots;
};

/// Mean over dimensions of the mean absolute deviation from the
/// per-dimension median.
double population_diversity(const std::vector<std::span<const double>>& points, int dimension);

/// (xpl, xpt) percentages: 100*div/div_max and 100*|div - div_max|/div_max;
/// (0, 100) when div_max is zero.
std::pair<double, double> exploration_exploitation(double diversity, double diversity_max);

/// Bookkeeping for evaluation-cadence sampling and net-snapshot checkpoints.
/// The optimizer supplies the population views; the recorder owns the running
/// diversity maximum and the due logic.
class MetricsRecorder {
public:
    MetricsRecorder(long long sample_every, std::vector<long long> checkpoints);

    bool sample_due(long long fes) const { return fes >= next_due_; }
    void add_sample(long long fes, double best_error, int n_s, int n_x, double diversity);

    bool snapshot_due(long long fes) const {
        return next_checkpoint_ < checkpoints_.size() &&
               fes >= checkpoints_[next_checkpoint_];
    }
    long long next_checkpoint() const { return checkpoints_[next_checkpoint_]; }
    void add_snapshot(NetSnapshot snapshot);
    bool snapshots_pending() const { return next_checkpoint_ < checkpoints_.size(); }

    const std::vector<ConvergenceSample>& samples() const { return samples_; }
    const std::vector<NetSnapshot>& snapshots() const { return snapshots_; }
    std::vector<ConvergenceSample> take_samples() { return std::move(samples_); }
    std::vector<NetSnapshot> take_snapshots() { return std::move(snapshots_); }
    double diversity_max() const { return diversity_max_; }

private:
    long long sample_every_;
    long long next_due_;
    std::vector<long long> checkpoints_;
    std::size_t next_checkpoint_ = 0;
    double diversity_max_ = 0.0;
    std::vector<ConvergenceSample> samples_;
    std::vector<NetSnapshot> snapshots_;
};

}  // namespace sno
