#pragma once

#include <span>
#include <vector>

#include "sno/rng.hpp"

namespace sno {

/// a + delta * (b - a): linear schedule between an initial and an end value,
/// driven by the consumed-budget ratio delta in [0, 1].
double lambda_adjust(double delta, double a, double b);

/// Population-size schedule lambda(delta^(1 - sqrt(delta))) from n_init to
/// n_end, rounded to the nearest integer.
int population_size_schedule(double delta, int n_init, int n_end);

/// Number of top regions entering the roulette: ceil of the schedule value
/// times the region count. Shrinks from h to 0.1*h by default; `widening`
/// flips the direction (0.1*h up to h).
int region_candidate_count(double delta, int region_count, bool widening);

/// Elastic points attracted per accepted candidate: max(1, ceil(n_a_max * delta)).
int attracted_count(double delta, int n_a_max);

/// Index into `weights` drawn proportionally to weight; uniform when the
/// total weight is not positive.
int roulette_pick(std::span<const double> weights, RandomSource& rng);

/// Tournament over `ids` (drawn with replacement, `size` draws); the lowest
/// objective wins, earlier draw wins ties. `objectives` is parallel to `ids`.
int tournament_pick(std::span<const int> ids, std::span<const double> objectives, int size,
                    RandomSource& rng);

// Candidate builders. All consume rng draws in a fixed documented order so a
// cloned RandomSource can replay them; all mutate a dimension only when
// phi_c < alpha or j == j_rand, and leave the base value otherwise.

/// Explorer candidate: the mutated value is either
///   ref + beta * (donor_a - donor_b)        with probability delta^c_s, or
///   base + beta * (ref - donor_a)           otherwise.
std::vector<double> region_search_candidate(std::span<const double> base,
                                            std::span<const double> ref,
                                            std::span<const double> donor_a,
                                            std::span<const double> donor_b, double alpha,
                                            double beta, double delta, double c_s,
                                            RandomSource& rng);

/// Miner candidate: the mutated value is either
///   ref + beta * (donor_a - donor_b)        with probability delta^c_x, or
///   base + beta * (donor_a - donor_b)       otherwise.
std::vector<double> point_search_candidate(std::span<const double> base,
                                           std::span<const double> ref,
                                           std::span<const double> donor_a,
                                           std::span<const double> donor_b, double alpha,
                                           double beta, double delta, double c_x,
                                           RandomSource& rng);

/// Net-point candidate for an attracted elastic point (the non-closest case):
/// crosses the point with both pull strategies
///   p_a = nu + beta * (donor_a - donor_b)
///   p_b = point + beta * (nu - point) + beta * (donor_a - donor_b)
/// and keeps whichever crossed result lies closer to nu (with probability
/// delta) or to the original point (otherwise).
std::vector<double> net_adjust_candidate(std::span<const double> point,
                                         std::span<const double> nu,
                                         std::span<const double> donor_a,
                                         std::span<const double> donor_b, double alpha,
                                         double beta, double delta, RandomSource& rng);

/// New-miner candidate: per dimension, with probability 0.5 a blend
/// delta^2 * ref + (1 - delta^2) * uniform(L, U), otherwise the ref value.
std::vector<double> population_fill_candidate(std::span<const double> ref,
                                              std::span<const double> lower,
                                              std::span<const double> upper, double delta,
                                              RandomSource& rng);

}  // namespace sno
