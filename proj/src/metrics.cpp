#include "sno/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "sno/kernels.hpp"

namespace sno {

double population_diversity(const std::vector<std::span<const double>>& points, int dimension) {
    const std::size_t n = points.size();
    if (n == 0) {
        return 0.0;
    }
    std::vector<double> column(n);
    double total = 0.0;
    for (int j = 0; j < dimension; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            column[i] = points[i][static_cast<std::size_t>(j)];
        }
        const std::size_t mid = n / 2;
        std::nth_element(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(mid),
                         column.end());
        double median = column[mid];
        if (n % 2 == 0) {
            const double below =
                *std::max_element(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(mid));
            median = 0.5 * (below + median);
        }
        total += kernels::abs_deviation_sum(column.data(), n, median) / static_cast<double>(n);
    }
    return total / static_cast<double>(dimension);
}

std::pair<double, double> exploration_exploitation(double diversity, double diversity_max) {
    if (diversity_max == 0.0) {
        return {0.0, 100.0};
    }
    const double xpl = 100.0 * diversity / diversity_max;
    const double xpt = 100.0 * std::fabs(diversity - diversity_max) / diversity_max;
    return {xpl, xpt};
}

MetricsRecorder::MetricsRecorder(long long sample_every, std::vector<long long> checkpoints)
    : sample_every_(std::max<long long>(1, sample_every)),
      next_due_(std::max<long long>(1, sample_every)),
      checkpoints_(std::move(checkpoints)) {
    std::sort(checkpoints_.begin(), checkpoints_.end());
    checkpoints_.erase(std::unique(checkpoints_.begin(), checkpoints_.end()), checkpoints_.end());
}

void MetricsRecorder::add_sample(long long fes, double best_error, int n_s, int n_x,
                                 double diversity) {
    diversity_max_ = std::max(diversity_max_, diversity);
    const auto [xpl, xpt] = exploration_exploitation(diversity, diversity_max_);
    samples_.push_back(ConvergenceSample{fes, best_error, n_s, n_x, diversity, xpl, xpt});
    next_due_ = (fes / sample_every_ + 1) * sample_every_;
}

void MetricsRecorder::add_snapshot(NetSnapshot snapshot) {
    snapshots_.push_back(std::move(snapshot));
    ++next_checkpoint_;
}

}  // namespace sno
