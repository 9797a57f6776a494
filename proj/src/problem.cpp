#include "sno/problem.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "sno/kernels.hpp"

namespace sno {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sphere(std::span<const double> x) {
    return kernels::sum_squares(x);
}

double ackley(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    const double sum_sq = kernels::sum_squares(x);
    double cos_sum = 0.0;
    for (const double xi : x) {
        cos_sum += std::cos(kTwoPi * xi);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(sum_sq / n)) - std::exp(cos_sum / n) + 20.0 +
           std::numbers::e;
}

double rastrigin(std::span<const double> x) {
    double sum = 0.0;
    for (const double xi : x) {
        sum += xi * xi - 10.0 * std::cos(kTwoPi * xi);
    }
    return sum + 10.0 * static_cast<double>(x.size());
}

double griewank(std::span<const double> x) {
    const double sum_sq = kernels::sum_squares(x);
    double prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return 1.0 + sum_sq / 4000.0 - prod;
}

double rosenbrock(std::span<const double> x) {
    return kernels::rosenbrock_chain(x);
}

double bent_cigar(std::span<const double> x) {
    return x[0] * x[0] + 1e6 * kernels::sum_squares(x.subspan(1));
}

struct FunctionSpec {
    const char* name;
    double (*fn)(std::span<const double>);
    double default_lower;
    double default_upper;
    bool optimum_at_ones;  // otherwise at the origin
};

constexpr FunctionSpec kFunctions[] = {
    {"ackley", ackley, -30.0, 30.0, false},
    {"bent_cigar", bent_cigar, -100.0, 100.0, false},
    {"griewank", griewank, -100.0, 100.0, false},
    {"rastrigin", rastrigin, -100.0, 100.0, false},
    {"rosenbrock", rosenbrock, -100.0, 100.0, true},
    {"sphere", sphere, -100.0, 100.0, false},
};

const FunctionSpec& find_function(const std::string& name) {
    for (const auto& spec : kFunctions) {
        if (name == spec.name) {
            return spec;
        }
    }
    std::string known;
    for (const auto& spec : kFunctions) {
        known += known.empty() ? spec.name : std::string(", ") + spec.name;
    }
    throw std::invalid_argument("unknown problem '" + name + "' (known: " + known + ")");
}

}  // namespace

void Problem::validate() const {
    if (dimension < 1) {
        throw std::invalid_argument("problem dimension must be >= 1");
    }
    if (static_cast<int>(lower_bounds.size()) != dimension ||
        static_cast<int>(upper_bounds.size()) != dimension) {
        throw std::invalid_argument("bounds size must match dimension");
    }
    for (int i = 0; i < dimension; ++i) {
        if (!(lower_bounds[i] < upper_bounds[i])) {
            throw std::invalid_argument("lower bound must be strictly below upper bound");
        }
    }
    if (!std::isfinite(optimum_value)) {
        throw std::invalid_argument("optimum_value must be finite");
    }
    if (!objective) {
        throw std::invalid_argument("problem has no objective");
    }
}

const std::vector<std::string>& problem_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& spec : kFunctions) {
            out.emplace_back(spec.name);
        }
        return out;
    }();
    return names;
}

Problem make_problem(const std::string& name, int dimension) {
    const auto& spec = find_function(name);
    return make_problem(name, dimension, spec.default_lower, spec.default_upper);
}

Problem make_problem(const std::string& name, int dimension, double lower, double upper) {
    const auto& spec = find_function(name);
    Problem problem;
    problem.name = spec.name;
    problem.dimension = dimension;
    problem.lower_bounds.assign(static_cast<std::size_t>(dimension), lower);
    problem.upper_bounds.assign(static_cast<std::size_t>(dimension), upper);
    problem.optimum_value = 0.0;
    problem.objective = [fn = spec.fn](std::span<const double> x) { return fn(x); };
    problem.validate();
    // The bundled optima all sit inside the default boxes; a custom box must
    // still contain the optimizer for error values to stay meaningful.
    const double optimizer_coord = spec.optimum_at_ones ? 1.0 : 0.0;
    if (lower > optimizer_coord || upper < optimizer_coord) {
        throw std::invalid_argument("bounds exclude the known optimum of " + name);
    }
    return problem;
}

void repair_bounds(std::span<double> point, const Problem& problem) {
    for (std::size_t i = 0; i < point.size(); ++i) {
        point[i] = std::clamp(point[i], problem.lower_bounds[i], problem.upper_bounds[i]);
    }
}

Evaluator::Evaluator(const Problem& problem, long long fes_max, double error_threshold)
    : problem_(&problem),
      budget_{0, fes_max, error_threshold},
      best_objective_(std::numeric_limits<double>::infinity()) {
    if (fes_max < 1) {
        throw std::invalid_argument("fes_max must be positive");
    }
}

std::optional<double> Evaluator::evaluate(std::span<const double> point) {
    if (budget_.exhausted()) {
        return std::nullopt;
    }
    assert(static_cast<int>(point.size()) == problem_->dimension);
#ifndef NDEBUG
    for (std::size_t i = 0; i < point.size(); ++i) {
        assert(point[i] >= problem_->lower_bounds[i] && point[i] <= problem_->upper_bounds[i]);
    }
#endif
    const double value = problem_->objective(point);
    ++budget_.fes;
    ++phase_counts_[static_cast<int>(phase_)];
    if (value < best_objective_) {
        best_objective_ = value;
        best_point_.assign(point.begin(), point.end());
    }
    if (observer_) {
        observer_();
    }
    return value;
}

}  // namespace sno
