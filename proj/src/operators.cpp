#include "sno/operators.hpp"

#include <algorithm>
#include <cmath>

#include "sno/kernels.hpp"

namespace sno {

double lambda_adjust(double delta, double a, double b) {
    return a + delta * (b - a);
}

int population_size_schedule(double delta, int n_init, int n_end) {
    const double warped = std::pow(delta, 1.0 - std::sqrt(delta));
    return static_cast<int>(std::lround(
        lambda_adjust(warped, static_cast<double>(n_init), static_cast<double>(n_end))));
}

int region_candidate_count(double delta, int region_count, bool widening) {
    const double fraction =
        widening ? lambda_adjust(delta, 0.1, 1.0) : lambda_adjust(delta, 1.0, 0.1);
    const int count = static_cast<int>(std::ceil(fraction * static_cast<double>(region_count)));
    return std::clamp(count, 1, region_count);
}

int attracted_count(double delta, int n_a_max) {
    return std::max(1, static_cast<int>(std::ceil(static_cast<double>(n_a_max) * delta)));
}

int roulette_pick(std::span<const double> weights, RandomSource& rng) {
    double total = 0.0;
    for (const double w : weights) {
        total += w;
    }
    if (!(total > 0.0)) {
        return rng.uniform_int(static_cast<int>(weights.size()));
    }
    const double threshold = rng.uniform01() * total;
    double cumulative = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        cumulative += weights[i];
        if (threshold <= cumulative) {
            return static_cast<int>(i);
        }
    }
    return static_cast<int>(weights.size()) - 1;
}

int tournament_pick(std::span<const int> ids, std::span<const double> objectives, int size,
                    RandomSource& rng) {
    int best_slot = rng.uniform_int(static_cast<int>(ids.size()));
    for (int k = 1; k < size; ++k) {
        const int slot = rng.uniform_int(static_cast<int>(ids.size()));
        if (objectives[static_cast<std::size_t>(slot)] <
            objectives[static_cast<std::size_t>(best_slot)]) {
            best_slot = slot;
        }
    }
    return ids[static_cast<std::size_t>(best_slot)];
}

// Draw order: j_rand, then per dimension phi_c and (only when the dimension
// mutates) the strategy draw phi.
std::vector<double> region_search_candidate(std::span<const double> base,
                                            std::span<const double> ref,
                                            std::span<const double> donor_a,
                                            std::span<const double> donor_b, double alpha,
                                            double beta, double delta, double c_s,
                                            RandomSource& rng) {
    const std::size_t d = base.size();
    const int j_rand = rng.uniform_int(static_cast<int>(d));
    const double p_ref_centered = std::pow(delta, c_s);
    std::vector<double> out(d);
    for (std::size_t j = 0; j < d; ++j) {
        if (rng.uniform01() < alpha || static_cast<int>(j) == j_rand) {
            out[j] = rng.uniform01() < p_ref_centered
                         ? ref[j] + beta * (donor_a[j] - donor_b[j])
                         : base[j] + beta * (ref[j] - donor_a[j]);
        } else {
            out[j] = base[j];
        }
    }
    return out;
}

std::vector<double> point_search_candidate(std::span<const double> base,
                                           std::span<const double> ref,
                                           std::span<const double> donor_a,
                                           std::span<const double> donor_b, double alpha,
                                           double beta, double delta, double c_x,
                                           RandomSource& rng) {
    const std::size_t d = base.size();
    const int j_rand = rng.uniform_int(static_cast<int>(d));
    const double p_ref_centered = std::pow(delta, c_x);
    std::vector<double> out(d);
    for (std::size_t j = 0; j < d; ++j) {
        if (rng.uniform01() < alpha || static_cast<int>(j) == j_rand) {
            const double step = beta * (donor_a[j] - donor_b[j]);
            out[j] = rng.uniform01() < p_ref_centered ? ref[j] + step : base[j] + step;
        } else {
            out[j] = base[j];
        }
    }
    return out;
}

namespace {

// Crossover of a full mutant vector against the kept point. Draw order:
// j_rand, then one phi_c per dimension.
std::vector<double> crossed(std::span<const double> keep, std::span<const double> mutant,
                            double alpha, RandomSource& rng) {
    const std::size_t d = keep.size();
    const int j_rand = rng.uniform_int(static_cast<int>(d));
    std::vector<double> out(d);
    for (std::size_t j = 0; j < d; ++j) {
        const bool mutate = rng.uniform01() < alpha || static_cast<int>(j) == j_rand;
        out[j] = mutate ? mutant[j] : keep[j];
    }
    return out;
}

}  // namespace

// Draw order: crossover draws for q_a, crossover draws for q_b, then the
// anchor draw phi.
std::vector<double> net_adjust_candidate(std::span<const double> point,
                                         std::span<const double> nu,
                                         std::span<const double> donor_a,
                                         std::span<const double> donor_b, double alpha,
                                         double beta, double delta, RandomSource& rng) {
    const std::size_t d = point.size();
    std::vector<double> pull_a(d);
    std::vector<double> pull_b(d);
    for (std::size_t j = 0; j < d; ++j) {
        const double step = beta * (donor_a[j] - donor_b[j]);
        pull_a[j] = nu[j] + step;
        pull_b[j] = point[j] + beta * (nu[j] - point[j]) + step;
    }
    std::vector<double> q_a = crossed(point, pull_a, alpha, rng);
    std::vector<double> q_b = crossed(point, pull_b, alpha, rng);
    const std::span<const double> anchor = rng.uniform01() < delta ? nu : point;
    const double dist_a = kernels::squared_distance(q_a, anchor);
    const double dist_b = kernels::squared_distance(q_b, anchor);
    return dist_a <= dist_b ? std::move(q_a) : std::move(q_b);
}

// Draw order per dimension: phi, then (blend branch only) the uniform sample.
std::vector<double> population_fill_candidate(std::span<const double> ref,
                                              std::span<const double> lower,
                                              std::span<const double> upper, double delta,
                                              RandomSource& rng) {
    const std::size_t d = ref.size();
    const double pull = delta * delta;
    std::vector<double> out(d);
    for (std::size_t j = 0; j < d; ++j) {
        if (rng.uniform01() < 0.5) {
            out[j] = pull * ref[j] + (1.0 - pull) * rng.uniform(lower[j], upper[j]);
        } else {
            out[j] = ref[j];
        }
    }
    return out;
}

}  // namespace sno
