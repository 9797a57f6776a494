#include "sno/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sno/operators.hpp"

namespace sno {

namespace {

bool is_perfect_square(int n) {
    const int root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    return root * root == n;
}

}  // namespace

void SnoConfig::validate() const {
    if (n_s_init < 3 || n_x_init < 3) {
        throw std::invalid_argument("initial population sizes must be >= 3");
    }
    if (n_s_end < 3 || n_s_end > n_s_init) {
        throw std::invalid_argument("n_s_end must lie in [3, n_s_init]");
    }
    if (n_x_end < n_x_init) {
        throw std::invalid_argument("n_x_end must be >= n_x_init");
    }
    if (n_p < 4 || !is_perfect_square(n_p)) {
        throw std::invalid_argument("n_p must be a perfect square >= 4");
    }
    if (alpha_init < 0.0 || alpha_init > 1.0) {
        throw std::invalid_argument("alpha_init must lie in [0, 1]");
    }
    if (!(beta_init > 0.0)) {
        throw std::invalid_argument("beta_init must be positive");
    }
    if (!(c_s > 0.0) || !(c_x > 0.0)) {
        throw std::invalid_argument("c_s and c_x must be positive");
    }
    if (!(rho_max > 0.0) || rho_max > 1.0) {
        throw std::invalid_argument("rho_max must lie in (0, 1]");
    }
    if (n_a_max < 1) {
        throw std::invalid_argument("n_a_max must be >= 1");
    }
    if (tournament_size < 1) {
        throw std::invalid_argument("tournament_size must be >= 1");
    }
    if (fes_max < n_s_init + n_x_init + n_p) {
        throw std::invalid_argument("fes_max is smaller than the initialization cost");
    }
    if (error_threshold < 0.0) {
        throw std::invalid_argument("error_threshold must be >= 0");
    }
    if (t_max < 0 || sample_every < 0) {
        throw std::invalid_argument("t_max and sample_every must be >= 0");
    }
    for (const long long checkpoint : snapshot_fes) {
        if (checkpoint < 1) {
            throw std::invalid_argument("snapshot checkpoints must be >= 1");
        }
    }
}

SnoOptimizer::SnoOptimizer(const SnoConfig& config, const Problem& problem)
    : config_(config),
      problem_(&problem),
      rng_(config.seed),
      evaluator_(problem, config.fes_max, config.error_threshold),
      state_{{}, {}, SpaceNet(config.n_p, config.alpha_init, config.beta_init), 0, 0},
      metrics_(config.sample_every > 0 ? config.sample_every
                                       : std::max<long long>(1, config.fes_max / 200),
               config.snapshot_fes) {
    config_.validate();
    problem.validate();
}

void SnoOptimizer::initialize() {
    if (initialized_) {
        return;
    }
    const int d = problem_->dimension;
    auto spawn = [&](std::vector<Individual>& population, int count) {
        population.reserve(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) {
            Individual member;
            member.id = state_.next_id++;
            member.position.resize(static_cast<std::size_t>(d));
            for (int j = 0; j < d; ++j) {
                member.position[static_cast<std::size_t>(j)] =
                    rng_.uniform(problem_->lower_bounds[static_cast<std::size_t>(j)],
                                 problem_->upper_bounds[static_cast<std::size_t>(j)]);
            }
            member.objective = *evaluator_.evaluate(member.position);
            population.push_back(std::move(member));
        }
    };
    evaluator_.set_phase(EvalPhase::Init);
    spawn(state_.explorers, config_.n_s_init);
    spawn(state_.miners, config_.n_x_init);
    for (int i = 0; i < state_.net.point_count(); ++i) {
        ElasticPoint& point = state_.net.point(i);
        point.position.resize(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) {
            point.position[static_cast<std::size_t>(j)] =
                rng_.uniform(problem_->lower_bounds[static_cast<std::size_t>(j)],
                             problem_->upper_bounds[static_cast<std::size_t>(j)]);
        }
        point.objective = *evaluator_.evaluate(point.position);
    }
    state_.net.snapshot_corner_objectives();
    initialized_ = true;

    take_sample();
    while (metrics_.snapshot_due(evaluator_.fes())) {
        take_snapshot(metrics_.next_checkpoint());
    }
    evaluator_.set_observer([this] {
        if (metrics_.sample_due(evaluator_.fes())) {
            take_sample();
        }
        while (metrics_.snapshot_due(evaluator_.fes())) {
            take_snapshot(metrics_.next_checkpoint());
        }
    });
}

bool SnoOptimizer::step() {
    if (!initialized_) {
        throw std::logic_error("step() before initialize()");
    }
    if (evaluator_.stopped() ||
        (config_.t_max > 0 && state_.iteration >= config_.t_max)) {
        return false;
    }

    const auto expected = state_.net.expected_values(evaluator_.delta());
    region_order_.resize(expected.size());
    std::iota(region_order_.begin(), region_order_.end(), 0);
    std::sort(region_order_.begin(), region_order_.end(), [&expected](int a, int b) {
        const double ea = expected[static_cast<std::size_t>(a)];
        const double eb = expected[static_cast<std::size_t>(b)];
        return ea > eb || (ea == eb && a < b);
    });

    auto freeze = [](const std::vector<Individual>& population,
                     std::vector<std::vector<double>>& out) {
        out.clear();
        out.reserve(population.size());
        for (const Individual& member : population) {
            out.push_back(member.position);
        }
    };
    freeze(state_.explorers, frozen_explorers_);
    freeze(state_.miners, frozen_miners_);

    region_search(expected);
    point_search();
    population_adjust();

    ++state_.iteration;
    if (on_iteration) {
        on_iteration(state_);
    }
    return !evaluator_.stopped();
}

RunRecord SnoOptimizer::run() {
    initialize();
    while (step()) {
    }
    finish_metrics();

    RunRecord record;
    record.seed = config_.seed;
    record.fes_used = evaluator_.fes();
    record.iterations = state_.iteration;
    record.final_objective = evaluator_.best_objective();
    record.final_error = evaluator_.best_error();
    record.best_point.assign(evaluator_.best_point().begin(), evaluator_.best_point().end());
    record.eval_counts = evaluator_.phase_counts();
    record.samples = metrics_.take_samples();
    record.snapshots = metrics_.take_snapshots();
    return record;
}

int SnoOptimizer::select_region(const std::vector<double>& expected) {
    const int pool = region_candidate_count(evaluator_.delta(), state_.net.region_count(),
                                            config_.widening_region_schedule);
    std::vector<double> weights(static_cast<std::size_t>(pool));
    for (int k = 0; k < pool; ++k) {
        weights[static_cast<std::size_t>(k)] =
            expected[static_cast<std::size_t>(region_order_[static_cast<std::size_t>(k)])];
    }
    const int picked = region_order_[static_cast<std::size_t>(roulette_pick(weights, rng_))];
    state_.net.record_visit(picked);
    return picked;
}

int SnoOptimizer::pick_reference_point(int region_id) {
    const double p_tournament = lambda_adjust(evaluator_.delta(), 0.1, 1.0);
    const Region& region = state_.net.region(region_id);
    if (rng_.uniform01() < p_tournament) {
        std::array<double, 4> objectives;
        for (std::size_t k = 0; k < 4; ++k) {
            objectives[k] = state_.net.point(region.corner_ids[k]).objective;
        }
        return tournament_pick(region.corner_ids, objectives, config_.tournament_size, rng_);
    }
    return state_.net.best_corner(region_id);
}

std::pair<double, double> SnoOptimizer::control_params(const Region& region) {
    if (!config_.adapt_control_params) {
        return {region.alpha, region.beta};
    }
    const double alpha = std::clamp(rng_.normal(region.alpha, 0.1), 0.0, 1.0);
    const double beta = std::clamp(rng_.normal(region.beta, 0.05), 0.01, 1.0);
    return {alpha, beta};
}

void SnoOptimizer::on_accept(Region& region, double alpha_used, double beta_used) {
    if (!config_.adapt_control_params) {
        return;
    }
    region.alpha += 0.1 * (alpha_used - region.alpha);
    region.beta += 0.1 * (beta_used - region.beta);
}

std::span<const double> SnoOptimizer::frozen_union_member(int index) const {
    const int n_s = static_cast<int>(frozen_explorers_.size());
    return index < n_s ? frozen_explorers_[static_cast<std::size_t>(index)]
                       : frozen_miners_[static_cast<std::size_t>(index - n_s)];
}

void SnoOptimizer::region_search(const std::vector<double>& expected) {
    PhaseGuard guard(evaluator_, EvalPhase::RegionSearch);
    const int n_s = static_cast<int>(frozen_explorers_.size());
    for (int i = 0; i < n_s; ++i) {
        if (evaluator_.stopped()) {
            return;
        }
        const int region_id = select_region(expected);
        Region& region = state_.net.region(region_id);
        const int ref_id = pick_reference_point(region_id);
        const auto [alpha, beta] = control_params(region);
        const auto [r1, r2] = rng_.two_distinct_excluding(n_s, i);
        auto candidate = region_search_candidate(
            frozen_explorers_[static_cast<std::size_t>(i)], state_.net.point(ref_id).position,
            frozen_explorers_[static_cast<std::size_t>(r1)],
            frozen_explorers_[static_cast<std::size_t>(r2)], alpha, beta, evaluator_.delta(),
            config_.c_s, rng_);
        repair_bounds(candidate, *problem_);
        const auto value = evaluator_.evaluate(candidate);
        if (!value) {
            return;
        }
        Individual& target = state_.explorers[static_cast<std::size_t>(i)];
        if (*value < target.objective) {
            target.position = std::move(candidate);
            target.objective = *value;
            on_accept(region, alpha, beta);
            space_net_adjust(target.position, target.objective);
        }
    }
}

void SnoOptimizer::point_search() {
    PhaseGuard guard(evaluator_, EvalPhase::PointSearch);
    const int n_x = static_cast<int>(frozen_miners_.size());
    for (int draw = 0; draw < n_x; ++draw) {
        if (evaluator_.stopped()) {
            return;
        }
        const int target_index = rng_.uniform_int(n_x);
        const double rho = lambda_adjust(rng_.uniform01(), 0.1, config_.rho_max);
        const auto pool = state_.net.top_pool(rho);
        const int ref_id = pool[static_cast<std::size_t>(
            rng_.uniform_int(static_cast<int>(pool.size())))];
        Region& region = state_.net.region(state_.net.home_region(ref_id));
        const auto [alpha, beta] = control_params(region);
        const auto [r1, r2] = rng_.two_distinct_excluding(n_x, target_index);
        auto candidate = point_search_candidate(
            frozen_miners_[static_cast<std::size_t>(target_index)],
            state_.net.point(ref_id).position, frozen_miners_[static_cast<std::size_t>(r1)],
            frozen_miners_[static_cast<std::size_t>(r2)], alpha, beta, evaluator_.delta(),
            config_.c_x, rng_);
        repair_bounds(candidate, *problem_);
        const auto value = evaluator_.evaluate(candidate);
        if (!value) {
            return;
        }
        Individual& target = state_.miners[static_cast<std::size_t>(target_index)];
        if (*value < target.objective) {
            target.position = std::move(candidate);
            target.objective = *value;
            on_accept(region, alpha, beta);
            space_net_adjust(target.position, target.objective);
        }
    }
}

void SnoOptimizer::space_net_adjust(std::span<const double> nu, double nu_objective) {
    PhaseGuard guard(evaluator_, EvalPhase::NetAdjust);
    const int n_a = attracted_count(evaluator_.delta(), config_.n_a_max);
    const auto nearest = state_.net.nearest_points(nu, n_a);
    const int union_size =
        static_cast<int>(frozen_explorers_.size() + frozen_miners_.size());
    for (std::size_t rank = 0; rank < nearest.size(); ++rank) {
        const int point_id = nearest[rank];
        ElasticPoint& point = state_.net.point(point_id);
        if (rank == 0) {
            // The closest point is replaced by the accepted candidate itself;
            // its objective is already known, no evaluation spent.
            if (nu_objective < point.objective) {
                point.position.assign(nu.begin(), nu.end());
                point.objective = nu_objective;
            }
            continue;
        }
        if (evaluator_.stopped()) {
            return;
        }
        Region& region = state_.net.region(state_.net.home_region(point_id));
        const auto [alpha, beta] = control_params(region);
        const auto donor_a = frozen_union_member(rng_.uniform_int(union_size));
        const auto donor_b = frozen_union_member(rng_.uniform_int(union_size));
        auto candidate = net_adjust_candidate(point.position, nu, donor_a, donor_b, alpha, beta,
                                              evaluator_.delta(), rng_);
        repair_bounds(candidate, *problem_);
        const auto value = evaluator_.evaluate(candidate);
        if (!value) {
            return;
        }
        if (*value < point.objective) {
            point.position = std::move(candidate);
            point.objective = *value;
            on_accept(region, alpha, beta);
        }
    }
}

void SnoOptimizer::population_adjust() {
    PhaseGuard guard(evaluator_, EvalPhase::PopulationAdjust);

    const int s_target =
        population_size_schedule(evaluator_.delta(), config_.n_s_init, config_.n_s_end);
    if (static_cast<int>(state_.explorers.size()) > s_target) {
        // Drop the worst explorers, keeping the survivors in their original order.
        std::vector<int> order(state_.explorers.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [this](int a, int b) {
            return state_.explorers[static_cast<std::size_t>(a)].objective <
                   state_.explorers[static_cast<std::size_t>(b)].objective;
        });
        std::vector<char> keep(state_.explorers.size(), 0);
        for (int k = 0; k < s_target; ++k) {
            keep[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = 1;
        }
        std::vector<Individual> survivors;
        survivors.reserve(static_cast<std::size_t>(s_target));
        for (std::size_t i = 0; i < state_.explorers.size(); ++i) {
            if (keep[i]) {
                survivors.push_back(std::move(state_.explorers[i]));
            }
        }
        state_.explorers = std::move(survivors);
    }

    const int x_target =
        population_size_schedule(evaluator_.delta(), config_.n_x_init, config_.n_x_end);
    while (static_cast<int>(state_.miners.size()) < x_target) {
        if (evaluator_.stopped()) {
            return;
        }
        const double rho = lambda_adjust(rng_.uniform01(), 0.1, config_.rho_max);
        const auto pool = state_.net.top_pool(rho);
        const int ref_id = pool[static_cast<std::size_t>(
            rng_.uniform_int(static_cast<int>(pool.size())))];
        auto candidate = population_fill_candidate(
            state_.net.point(ref_id).position, problem_->lower_bounds, problem_->upper_bounds,
            evaluator_.delta(), rng_);
        repair_bounds(candidate, *problem_);
        const auto value = evaluator_.evaluate(candidate);
        if (!value) {
            return;
        }
        Individual member;
        member.id = state_.next_id++;
        member.position = std::move(candidate);
        member.objective = *value;
        state_.miners.push_back(std::move(member));
    }
}

void SnoOptimizer::take_sample() {
    std::vector<std::span<const double>> positions;
    positions.reserve(state_.explorers.size() + state_.miners.size());
    for (const Individual& member : state_.explorers) {
        positions.emplace_back(member.position);
    }
    for (const Individual& member : state_.miners) {
        positions.emplace_back(member.position);
    }
    const double diversity = population_diversity(positions, problem_->dimension);
    metrics_.add_sample(evaluator_.fes(), evaluator_.best_error(),
                        static_cast<int>(state_.explorers.size()),
                        static_cast<int>(state_.miners.size()), diversity);
}

void SnoOptimizer::take_snapshot(long long checkpoint) {
    NetSnapshot snapshot;
    snapshot.checkpoint = checkpoint;
    snapshot.fes = evaluator_.fes();
    snapshot.points = state_.net.points();
    snapshot.explorer_positions.reserve(state_.explorers.size());
    for (const Individual& member : state_.explorers) {
        snapshot.explorer_positions.push_back(member.position);
        snapshot.explorer_objectives.push_back(member.objective);
    }
    snapshot.miner_positions.reserve(state_.miners.size());
    for (const Individual& member : state_.miners) {
        snapshot.miner_positions.push_back(member.position);
        snapshot.miner_objectives.push_back(member.objective);
    }
    metrics_.add_snapshot(std::move(snapshot));
}

void SnoOptimizer::finish_metrics() {
    evaluator_.set_observer({});
    if (metrics_.samples().empty() || metrics_.samples().back().fes < evaluator_.fes()) {
        take_sample();
    }
    // Checkpoints the run never reached (early convergence or a checkpoint
    // past fes_max) are flushed with the terminal state.
    while (metrics_.snapshots_pending()) {
        take_snapshot(metrics_.next_checkpoint());
    }
}

}  // namespace sno
