#include "sno/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sno {

namespace {

double median_of(std::span<const double> values) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    return n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double mean_of(std::span<const double> values) {
    return std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
}

/// Rank-sum statistic U_a plus the tie-group sizes of the pooled sample.
std::pair<double, std::vector<long long>> mann_whitney_u(std::span<const double> a,
                                                         std::span<const double> b) {
    std::vector<std::pair<double, int>> pooled;  // value, sample tag
    pooled.reserve(a.size() + b.size());
    for (const double v : a) {
        pooled.emplace_back(v, 0);
    }
    for (const double v : b) {
        pooled.emplace_back(v, 1);
    }
    std::sort(pooled.begin(), pooled.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });

    double rank_sum_a = 0.0;
    std::vector<long long> tie_groups;
    std::size_t i = 0;
    while (i < pooled.size()) {
        std::size_t j = i;
        while (j < pooled.size() && pooled[j].first == pooled[i].first) {
            ++j;
        }
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k) {
            if (pooled[k].second == 0) {
                rank_sum_a += midrank;
            }
        }
        tie_groups.push_back(static_cast<long long>(j - i));
        i = j;
    }
    const double n_a = static_cast<double>(a.size());
    const double u_a = rank_sum_a - n_a * (n_a + 1.0) / 2.0;
    return {u_a, tie_groups};
}

/// Exact null distribution of U for sample sizes (n, m), no ties:
/// c(n, m, u) = c(n-1, m, u-m) + c(n, m-1, u). Sizes are tiny (n, m < 10).
double exact_cdf(long long u, int n, int m) {
    const int u_max = n * m;
    std::vector<std::vector<std::vector<double>>> c(
        static_cast<std::size_t>(n + 1),
        std::vector<std::vector<double>>(
            static_cast<std::size_t>(m + 1),
            std::vector<double>(static_cast<std::size_t>(u_max + 1), 0.0)));
    for (int j = 0; j <= m; ++j) {
        c[0][static_cast<std::size_t>(j)][0] = 1.0;
    }
    for (int k = 0; k <= n; ++k) {
        c[static_cast<std::size_t>(k)][0][0] = 1.0;
    }
    for (int k = 1; k <= n; ++k) {
        for (int j = 1; j <= m; ++j) {
            for (int u_val = 0; u_val <= k * j; ++u_val) {
                double total = c[static_cast<std::size_t>(k)][static_cast<std::size_t>(j - 1)]
                                [static_cast<std::size_t>(u_val)];
                if (u_val >= j) {
                    total += c[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j)]
                              [static_cast<std::size_t>(u_val - j)];
                }
                c[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]
                 [static_cast<std::size_t>(u_val)] = total;
            }
        }
    }
    double below = 0.0;
    double total = 0.0;
    for (int u_val = 0; u_val <= u_max; ++u_val) {
        const double ways =
            c[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)]
             [static_cast<std::size_t>(u_val)];
        total += ways;
        if (u_val <= u) {
            below += ways;
        }
    }
    return below / total;
}

double normal_two_sided_p(double u_a, double n_a, double n_b,
                          std::span<const long long> tie_groups) {
    const double n = n_a + n_b;
    double tie_term = 0.0;
    for (const long long t : tie_groups) {
        const double td = static_cast<double>(t);
        tie_term += td * td * td - td;
    }
    const double variance =
        n_a * n_b / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (!(variance > 0.0)) {
        return 1.0;
    }
    const double mean = n_a * n_b / 2.0;
    const double shift = std::max(0.0, std::fabs(u_a - mean) - 0.5);  // continuity
    const double z = shift / std::sqrt(variance);
    return std::erfc(z / std::sqrt(2.0));
}

bool has_ties(std::span<const long long> tie_groups) {
    return std::any_of(tie_groups.begin(), tie_groups.end(),
                       [](long long t) { return t > 1; });
}

WilcoxonOutcome direction(std::span<const double> a, std::span<const double> b) {
    const double median_a = median_of(a);
    const double median_b = median_of(b);
    if (median_a < median_b) {
        return WilcoxonOutcome::Better;
    }
    if (median_a > median_b) {
        return WilcoxonOutcome::Worse;
    }
    const double mean_a = mean_of(a);
    const double mean_b = mean_of(b);
    if (mean_a < mean_b) {
        return WilcoxonOutcome::Better;
    }
    if (mean_a > mean_b) {
        return WilcoxonOutcome::Worse;
    }
    return WilcoxonOutcome::NoDifference;
}

}  // namespace

const char* to_string(WilcoxonOutcome outcome) {
    switch (outcome) {
        case WilcoxonOutcome::Better:
            return "Better";
        case WilcoxonOutcome::Worse:
            return "Worse";
        default:
            return "NoDifference";
    }
}

std::vector<double> midranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&values](int x, int y) {
        return values[static_cast<std::size_t>(x)] < values[static_cast<std::size_t>(y)];
    });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && values[static_cast<std::size_t>(order[j])] ==
                            values[static_cast<std::size_t>(order[i])]) {
            ++j;
        }
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k) {
            ranks[static_cast<std::size_t>(order[k])] = midrank;
        }
        i = j;
    }
    return ranks;
}

std::vector<std::pair<std::string, double>> average_ranks(std::span<const ResultTable> tables,
                                                          RankMode mode) {
    if (tables.size() < 2) {
        throw std::invalid_argument("rank comparison needs at least 2 algorithms");
    }
    const auto& reference = tables.front().errors_by_function;
    for (const ResultTable& table : tables) {
        if (table.errors_by_function.size() != reference.size()) {
            throw std::invalid_argument("algorithm '" + table.algorithm +
                                        "' covers a different function set");
        }
        for (const auto& [function, errors] : table.errors_by_function) {
            const auto it = reference.find(function);
            if (it == reference.end()) {
                throw std::invalid_argument("algorithm '" + table.algorithm +
                                            "' has unmatched function '" + function + "'");
            }
            if (errors.size() != it->second.size()) {
                throw std::invalid_argument("trial count mismatch on function '" + function +
                                            "' for algorithm '" + table.algorithm + "'");
            }
            if (errors.empty()) {
                throw std::invalid_argument("function '" + function + "' has no trials");
            }
        }
    }

    const std::size_t k = tables.size();
    std::vector<double> rank_totals(k, 0.0);
    long long cells = 0;
    std::vector<double> cell(k);
    for (const auto& [function, reference_errors] : reference) {
        if (mode == RankMode::Best) {
            for (std::size_t t = 0; t < k; ++t) {
                const auto& errors = tables[t].errors_by_function.at(function);
                cell[t] = *std::min_element(errors.begin(), errors.end());
            }
            const auto ranks = midranks(cell);
            for (std::size_t t = 0; t < k; ++t) {
                rank_totals[t] += ranks[t];
            }
            ++cells;
        } else {
            const std::size_t trials = reference_errors.size();
            for (std::size_t trial = 0; trial < trials; ++trial) {
                for (std::size_t t = 0; t < k; ++t) {
                    cell[t] = tables[t].errors_by_function.at(function)[trial];
                }
                const auto ranks = midranks(cell);
                for (std::size_t t = 0; t < k; ++t) {
                    rank_totals[t] += ranks[t];
                }
                ++cells;
            }
        }
    }

    std::vector<std::pair<std::string, double>> result;
    result.reserve(k);
    for (std::size_t t = 0; t < k; ++t) {
        result.emplace_back(tables[t].algorithm, rank_totals[t] / static_cast<double>(cells));
    }
    return result;
}

double rank_sum_p_value(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("rank-sum samples must be non-empty");
    }
    const auto [u_a, tie_groups] = mann_whitney_u(a, b);
    const double n_a = static_cast<double>(a.size());
    const double n_b = static_cast<double>(b.size());
    if (a.size() < 10 && b.size() < 10 && !has_ties(tie_groups)) {
        const double u_b = n_a * n_b - u_a;
        const long long u_min = static_cast<long long>(std::llround(std::min(u_a, u_b)));
        const double p =
            2.0 * exact_cdf(u_min, static_cast<int>(a.size()), static_cast<int>(b.size()));
        return std::min(1.0, p);
    }
    return std::min(1.0, normal_two_sided_p(u_a, n_a, n_b, tie_groups));
}

double signed_rank_p_value(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("signed-rank needs paired samples of equal size");
    }
    std::vector<double> magnitudes;
    std::vector<bool> positive;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) {
            magnitudes.push_back(std::fabs(d));
            positive.push_back(d > 0.0);
        }
    }
    if (magnitudes.empty()) {
        return 1.0;
    }
    const auto ranks = midranks(magnitudes);
    double w_plus = 0.0;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        if (positive[i]) {
            w_plus += ranks[i];
        }
    }
    const double n = static_cast<double>(magnitudes.size());
    const double mean = n * (n + 1.0) / 4.0;
    double tie_term = 0.0;
    std::vector<double> sorted(magnitudes);
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) {
            ++j;
        }
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    const double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    if (!(variance > 0.0)) {
        return 1.0;
    }
    const double shift = std::max(0.0, std::fabs(w_plus - mean) - 0.5);
    return std::min(1.0, std::erfc(shift / std::sqrt(variance) / std::sqrt(2.0)));
}

WilcoxonOutcome wilcoxon_classify(std::span<const double> a, std::span<const double> b,
                                  double significance) {
    if (std::equal(a.begin(), a.end(), b.begin(), b.end())) {
        return WilcoxonOutcome::NoDifference;
    }
    if (rank_sum_p_value(a, b) >= significance) {
        return WilcoxonOutcome::NoDifference;
    }
    return direction(a, b);
}

WilcoxonOutcome wilcoxon_classify_paired(std::span<const double> a, std::span<const double> b,
                                         double significance) {
    if (std::equal(a.begin(), a.end(), b.begin(), b.end())) {
        return WilcoxonOutcome::NoDifference;
    }
    if (signed_rank_p_value(a, b) >= significance) {
        return WilcoxonOutcome::NoDifference;
    }
    return direction(a, b);
}

}  // namespace sno
