#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "sno/problem.hpp"

using namespace sno;

namespace {

// Straight-line formulas, independent of the kernel-backed implementations.
double ackley_by_hand(const std::vector<double>& x) {
    double sum_sq = 0.0;
    double cos_sum = 0.0;
    for (const double xi : x) {
        sum_sq += xi * xi;
        cos_sum += std::cos(2.0 * std::numbers::pi * xi);
    }
    const double n = static_cast<double>(x.size());
    return -20.0 * std::exp(-0.2 * std::sqrt(sum_sq / n)) - std::exp(cos_sum / n) + 20.0 +
           std::numbers::e;
}

double rosenbrock_by_hand(const std::vector<double>& x) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        sum += 100.0 * std::pow(x[i + 1] - x[i] * x[i], 2) + std::pow(1.0 - x[i], 2);
    }
    return sum;
}

}  // namespace

TEST_CASE("bundled functions hit their known optima") {
    for (const std::string& name : problem_names()) {
        for (const int d : {2, 10, 30}) {
            const Problem p = make_problem(name, d);
            std::vector<double> optimizer(static_cast<std::size_t>(d),
                                          name == "rosenbrock" ? 1.0 : 0.0);
            CHECK_MESSAGE(std::fabs(p.objective(optimizer) - p.optimum_value) <= 1e-12,
                          name, " d=", d);
        }
    }
}

TEST_CASE("default search ranges") {
    const Problem ackley = make_problem("ackley", 3);
    CHECK(ackley.lower_bounds == std::vector<double>{-30.0, -30.0, -30.0});
    CHECK(ackley.upper_bounds == std::vector<double>{30.0, 30.0, 30.0});
    const Problem rastrigin = make_problem("rastrigin", 2);
    CHECK(rastrigin.lower_bounds.front() == -100.0);
    CHECK(rastrigin.upper_bounds.front() == 100.0);
    CHECK_THROWS_AS(make_problem("nonesuch", 2), std::invalid_argument);
    CHECK_THROWS_AS(make_problem("sphere", 2, 5.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_problem("rosenbrock", 2, -2.0, 0.5), std::invalid_argument);
}

TEST_CASE("objective values against straight-line formulas") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    const Problem ackley = make_problem("ackley", 5);
    const Problem rosen = make_problem("rosenbrock", 5);
    const Problem cigar = make_problem("bent_cigar", 5);
    const Problem sphere = make_problem("sphere", 5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x(5);
        for (double& xi : x) {
            xi = coord(rng);
        }
        CHECK(ackley.objective(x) == doctest::Approx(ackley_by_hand(x)).epsilon(1e-12));
        CHECK(rosen.objective(x) == doctest::Approx(rosenbrock_by_hand(x)).epsilon(1e-12));
        double cigar_hand = x[0] * x[0];
        double sphere_hand = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sphere_hand += x[i] * x[i];
            if (i > 0) {
                cigar_hand += 1e6 * x[i] * x[i];
            }
        }
        CHECK(cigar.objective(x) == doctest::Approx(cigar_hand).epsilon(1e-12));
        CHECK(sphere.objective(x) == doctest::Approx(sphere_hand).epsilon(1e-12));
    }
}

TEST_CASE("repair_bounds clamps and is idempotent") {
    const Problem p = make_problem("ackley", 3);
    std::vector<double> point{5.0, 35.0, -40.0};
    repair_bounds(point, p);
    CHECK(point == std::vector<double>{5.0, 30.0, -30.0});
    std::vector<double> again = point;
    repair_bounds(again, p);
    CHECK(again == point);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> wild(-500.0, 500.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x{wild(rng), wild(rng), wild(rng)};
        repair_bounds(x, p);
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(x[i] >= p.lower_bounds[i]);
            CHECK(x[i] <= p.upper_bounds[i]);
        }
        std::vector<double> y = x;
        repair_bounds(y, p);
        CHECK(y == x);
    }
}

TEST_CASE("budget delta") {
    EvaluationBudget budget{100000, 200000, 1e-8};
    CHECK(budget.delta() == 0.5);
    budget.fes = 0;
    CHECK(budget.delta() == 0.0);
    budget.fes = budget.fes_max;
    CHECK(budget.delta() == 1.0);
    CHECK(budget.exhausted());
}

TEST_CASE("evaluator accounting and refusal") {
    const Problem p = make_problem("sphere", 2);
    Evaluator evaluator(p, 3, 1e-8);
    const std::vector<double> far{10.0, 10.0};

    evaluator.set_phase(EvalPhase::RegionSearch);
    CHECK(evaluator.evaluate(far).value() == 200.0);
    CHECK(evaluator.fes() == 1);
    CHECK(evaluator.best_objective() == 200.0);

    const std::vector<double> origin{0.0, 0.0};
    CHECK(evaluator.evaluate(origin).value() == 0.0);
    CHECK(evaluator.best_error() == 0.0);
    CHECK(evaluator.converged());
    CHECK(evaluator.stopped());

    // Convergence stops the run loop but does not block accounting itself;
    // only budget exhaustion refuses evaluations.
    CHECK(evaluator.evaluate(far).has_value());
    CHECK(evaluator.fes() == 3);
    CHECK_FALSE(evaluator.evaluate(far).has_value());
    CHECK(evaluator.fes() == 3);
    CHECK(evaluator.phase_counts()[static_cast<int>(EvalPhase::RegionSearch)] == 3);
    // Best point survives later worse evaluations.
    CHECK(evaluator.best_point()[0] == 0.0);
}

TEST_CASE("phase guard restores the previous phase") {
    const Problem p = make_problem("sphere", 1);
    Evaluator evaluator(p, 10, 1e-8);
    evaluator.set_phase(EvalPhase::PointSearch);
    {
        PhaseGuard guard(evaluator, EvalPhase::NetAdjust);
        CHECK(evaluator.phase() == EvalPhase::NetAdjust);
    }
    CHECK(evaluator.phase() == EvalPhase::PointSearch);
}
