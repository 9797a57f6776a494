#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sno {

/// A bound-constrained minimization problem. Immutable once built and safe to
/// share across concurrent runs.
struct Problem {
    std::string name;
    int dimension = 0;
    std::vector<double> lower_bounds;
    std::vector<double> upper_bounds;
    /// Objective value at the known global optimum; error = f(s) - optimum_value.
    double optimum_value = 0.0;
    std::function<double(std::span<const double>)> objective;

    void validate() const;
};

const std::vector<std::string>& problem_names();

/// Builds one of the bundled test functions with its default search range
/// (ackley: [-30, 30], everything else: [-100, 100]).
Problem make_problem(const std::string& name, int dimension);
Problem make_problem(const std::string& name, int dimension, double lower, double upper);

/// Clamps each coordinate into [L_i, U_i]; idempotent.
void repair_bounds(std::span<double> point, const Problem& problem);

struct EvaluationBudget {
    long long fes = 0;
    long long fes_max = 0;
    double error_threshold = 1e-8;

    double delta() const { return static_cast<double>(fes) / static_cast<double>(fes_max); }
    bool exhausted() const { return fes >= fes_max; }
};

enum class EvalPhase { Init = 0, RegionSearch, PointSearch, NetAdjust, PopulationAdjust };
inline constexpr int kEvalPhaseCount = 5;

/// Budget-tracked objective evaluation with best-so-far tracking and
/// per-phase accounting. The only code path that advances `fes`.
class Evaluator {
public:
    Evaluator(const Problem& problem, long long fes_max, double error_threshold);

    /// Evaluates a repaired point. Returns nothing once the budget is
    /// exhausted (the caller's signal to stop); otherwise increments fes by
    /// exactly one and updates the best-so-far tracker.
    std::optional<double> evaluate(std::span<const double> point);

    /// Budget exhausted or best error already under the threshold.
    bool stopped() const { return budget_.exhausted() || converged(); }
    bool converged() const { return best_error() < budget_.error_threshold; }

    double delta() const { return budget_.delta(); }
    long long fes() const { return budget_.fes; }
    const EvaluationBudget& budget() const { return budget_; }
    const Problem& problem() const { return *problem_; }

    double best_objective() const { return best_objective_; }
    double best_error() const { return best_objective_ - problem_->optimum_value; }
    std::span<const double> best_point() const { return best_point_; }

    EvalPhase phase() const { return phase_; }
    void set_phase(EvalPhase phase) { phase_ = phase; }
    const std::array<long long, kEvalPhaseCount>& phase_counts() const { return phase_counts_; }

    /// Invoked after every completed evaluation (best tracker already fresh).
    void set_observer(std::function<void()> observer) { observer_ = std::move(observer); }

private:
    const Problem* problem_;
    EvaluationBudget budget_;
    double best_objective_;
    std::vector<double> best_point_;
    EvalPhase phase_ = EvalPhase::Init;
    std::array<long long, kEvalPhaseCount> phase_counts_{};
    std::function<void()> observer_;
};

/// Scoped phase switch; restores the previous phase on exit.
class PhaseGuard {
public:
    PhaseGuard(Evaluator& evaluator, EvalPhase phase)
        : evaluator_(evaluator), saved_(evaluator.phase()) {
        evaluator_.set_phase(phase);
    }
    ~PhaseGuard() { evaluator_.set_phase(saved_); }
    PhaseGuard(const PhaseGuard&) = delete;
    PhaseGuard& operator=(const PhaseGuard&) = delete;

private:
    Evaluator& evaluator_;
    EvalPhase saved_;
};

}  // namespace sno
