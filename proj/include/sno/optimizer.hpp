#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sno/metrics.hpp"
#include "sno/problem.hpp"
#include "sno/rng.hpp"
#include "sno/spacenet.hpp"

namespace sno {

struct SnoConfig {
    int n_s_init = 190;
    int n_s_end = 38;   // 0.2 * n_s_init
    int n_x_init = 19;  // 0.1 * n_s_init
    int n_x_end = 38;   // 0.2 * n_s_init
    int n_p = 81;
    double alpha_init = 0.5;
    double beta_init = 0.1;
    double c_s = 2.0;
    double c_x = 2.5;
    double rho_max = 0.7;
    int n_a_max = 5;
    int tournament_size = 2;
    long long fes_max = 200000;
    double error_threshold = 1e-8;
    std::uint64_t seed = 1;
    long long t_max = 0;  // 0: no iteration cap

    /// Follow the schedule text (roulette pool widening from 0.1*h to h)
    /// instead of the default narrowing from h down to 0.1*h.
    bool widening_region_schedule = false;
    /// Jitter per-region alpha/beta around their current values and nudge
    /// them toward settings that produced accepted candidates. Off by
    /// default: the published settings hold them constant.
    bool adapt_control_params = false;

    long long sample_every = 0;  // 0: fes_max / 200
    std::vector<long long> snapshot_fes;

    void validate() const;  // throws std::invalid_argument
};

struct Individual {
    std::uint32_t id = 0;
    std::vector<double> position;
    double objective = 0.0;
};

struct SnoState {
    std::vector<Individual> explorers;
    std::vector<Individual> miners;
    SpaceNet net;
    long long iteration = 0;
    std::uint32_t next_id = 0;
};

class SnoOptimizer {
public:
    SnoOptimizer(const SnoConfig& config, const Problem& problem);

    /// Spends n_s_init + n_x_init + n_p evaluations building the populations
    /// and the net. Called implicitly by run().
    void initialize();

    /// One full iteration: expected values, region search, point search,
    /// population adjustment. Returns false once the run should stop.
    bool step();

    RunRecord run();

    const SnoState& state() const { return state_; }
    const Evaluator& evaluator() const { return evaluator_; }
    const SnoConfig& config() const { return config_; }

    /// Test/instrumentation hook, fired after every completed iteration.
    std::function<void(const SnoState&)> on_iteration;

private:
    void region_search(const std::vector<double>& expected);
    void point_search();
    void population_adjust();
    void space_net_adjust(std::span<const double> nu, double nu_objective);

    int select_region(const std::vector<double>& expected);
    int pick_reference_point(int region_id);
    std::pair<double, double> control_params(const Region& region);
    void on_accept(Region& region, double alpha_used, double beta_used);
    std::span<const double> frozen_union_member(int index) const;

    void take_sample();
    void take_snapshot(long long checkpoint);
    void finish_metrics();

    SnoConfig config_;
    const Problem* problem_;
    RandomSource rng_;
    Evaluator evaluator_;
    SnoState state_;
    MetricsRecorder metrics_;
    bool initialized_ = false;

    // Iteration-frozen copies of the searching populations; all donor and
    // base-position draws read these while acceptances land in state_.
    std::vector<std::vector<double>> frozen_explorers_;
    std::vector<std::vector<double>> frozen_miners_;
    // Region ids sorted by descending expected value, refreshed per iteration.
    std::vector<int> region_order_;
};

}  // namespace sno
