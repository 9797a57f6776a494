#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace sno {

enum class RankMode { Avg, Best };
enum class WilcoxonOutcome { Better, NoDifference, Worse };

const char* to_string(WilcoxonOutcome outcome);

/// Per-algorithm final errors, keyed by function label, one entry per trial.
struct ResultTable {
    std::string algorithm;
    std::map<std::string, std::vector<double>> errors_by_function;
};

/// 1-based ranks of `values` (ascending), ties receiving the mid-rank.
std::vector<double> midranks(std::span<const double> values);

/// Mean rank per algorithm, in input order. Avg ranks jointly per
/// (function, trial) cell; Best ranks per function using each algorithm's
/// best trial. Requires >= 2 tables with identical function sets and equal
/// trial counts per function.
std::vector<std::pair<std::string, double>> average_ranks(std::span<const ResultTable> tables,
                                                          RankMode mode);

/// Two-sided rank-sum p-value: exact enumeration when both samples have
/// fewer than 10 values and no ties are present, otherwise the normal
/// approximation with continuity and tie corrections.
double rank_sum_p_value(std::span<const double> a, std::span<const double> b);

/// Two-sided signed-rank p-value for paired samples (normal approximation,
/// zero differences dropped). Returns 1 when every pair ties.
double signed_rank_p_value(std::span<const double> a, std::span<const double> b);

/// Rank-sum classification of a against b: NoDifference unless the test is
/// significant, then Better when a's errors sit lower.
WilcoxonOutcome wilcoxon_classify(std::span<const double> a, std::span<const double> b,
                                  double significance = 0.05);

/// Paired (signed-rank) variant for trials matched by seed.
WilcoxonOutcome wilcoxon_classify_paired(std::span<const double> a, std::span<const double> b,
                                         double significance = 0.05);

}  // namespace sno
