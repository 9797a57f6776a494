#include "sno/spacenet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sno/kernels.hpp"
#include "sno/operators.hpp"

namespace sno {

namespace {

// Min-max normalization of one term across regions; all-equal collapses to
// 0.5 so the term stays finite and unbiased.
void normalize_into(std::vector<double>& values) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double min = *lo;
    const double max = *hi;
    if (max == min) {
        std::fill(values.begin(), values.end(), 0.5);
        return;
    }
    const double range = max - min;
    for (double& v : values) {
        v = (v - min) / range;
    }
}

}  // namespace

std::vector<double> expected_values_from_stats(std::span<const RegionStats> stats, double delta) {
    const std::size_t h = stats.size();
    std::vector<double> ratio(h);
    std::vector<double> improvement(h);
    std::vector<double> best(h);
    for (std::size_t i = 0; i < h; ++i) {
        ratio[i] = stats[i].visit_ratio;
        improvement[i] = stats[i].improvement;
        best[i] = stats[i].best_objective;
    }
    normalize_into(ratio);
    normalize_into(improvement);
    normalize_into(best);
    const double weight = lambda_adjust(delta, 2.0, 1.0);
    std::vector<double> expected(h);
    for (std::size_t i = 0; i < h; ++i) {
        expected[i] = ratio[i] + improvement[i] + weight * (1.0 - best[i]);
    }
    return expected;
}

SpaceNet::SpaceNet(int n_points, double alpha_init, double beta_init) {
    if (n_points < 4) {
        throw std::invalid_argument("space net needs at least 4 elastic points");
    }
    const int width = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_points))));
    if (width * width != n_points) {
        throw std::invalid_argument("number of elastic points must be a perfect square");
    }
    grid_width_ = width;
    points_.resize(static_cast<std::size_t>(n_points));
    for (int id = 0; id < n_points; ++id) {
        points_[static_cast<std::size_t>(id)].grid_row = id / width;
        points_[static_cast<std::size_t>(id)].grid_col = id % width;
    }
    const int cells = width - 1;
    regions_.resize(static_cast<std::size_t>(cells * cells));
    for (int r = 0; r < cells; ++r) {
        for (int c = 0; c < cells; ++c) {
            Region& region = regions_[static_cast<std::size_t>(r * cells + c)];
            region.corner_ids = {
                r * width + c,
                r * width + c + 1,
                (r + 1) * width + c,
                (r + 1) * width + c + 1,
            };
            region.alpha = alpha_init;
            region.beta = beta_init;
        }
    }
    containing_regions_.resize(points_.size());
    for (int id = 0; id < region_count(); ++id) {
        for (const int corner : regions_[static_cast<std::size_t>(id)].corner_ids) {
            containing_regions_[static_cast<std::size_t>(corner)].push_back(id);
        }
    }
}

int SpaceNet::best_corner(int region_id) const {
    const Region& region = regions_[static_cast<std::size_t>(region_id)];
    int best = region.corner_ids[0];
    for (const int corner : region.corner_ids) {
        if (point(corner).objective < point(best).objective) {
            best = corner;
        }
    }
    return best;
}

std::vector<RegionStats> SpaceNet::raw_stats() const {
    std::vector<RegionStats> stats(regions_.size());
    for (std::size_t i = 0; i < regions_.size(); ++i) {
        const Region& region = regions_[i];
        double improvement = 0.0;
        double best = point(region.corner_ids[0]).objective;
        for (int j = 0; j < 4; ++j) {
            const double current = point(region.corner_ids[static_cast<std::size_t>(j)]).objective;
            improvement += region.prev_corner_objectives[static_cast<std::size_t>(j)] - current;
            best = std::min(best, current);
        }
        stats[i] = RegionStats{
            static_cast<double>(region.visits_b) / static_cast<double>(region.visits_a),
            improvement,
            best,
        };
    }
    return stats;
}

std::vector<double> SpaceNet::expected_values(double delta) {
    const auto stats = raw_stats();
    auto expected = expected_values_from_stats(stats, delta);
    snapshot_corner_objectives();
    return expected;
}

void SpaceNet::record_visit(int selected_region) {
    for (int id = 0; id < region_count(); ++id) {
        if (id == selected_region) {
            ++regions_[static_cast<std::size_t>(id)].visits_a;
        } else {
            ++regions_[static_cast<std::size_t>(id)].visits_b;
        }
    }
}

std::vector<int> SpaceNet::nearest_points(std::span<const double> nu, int count) const {
    std::vector<std::pair<double, int>> by_distance;
    by_distance.reserve(points_.size());
    for (int id = 0; id < point_count(); ++id) {
        by_distance.emplace_back(kernels::squared_distance(point(id).position, nu), id);
    }
    std::sort(by_distance.begin(), by_distance.end());
    const int n = std::min(count, point_count());
    std::vector<int> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = by_distance[static_cast<std::size_t>(i)].second;
    }
    return out;
}

std::vector<int> SpaceNet::top_pool(double rho) const {
    const int size = std::max(
        1, static_cast<int>(std::floor(rho * static_cast<double>(point_count()))));
    std::vector<int> ids(points_.size());
    std::iota(ids.begin(), ids.end(), 0);
    std::sort(ids.begin(), ids.end(), [this](int a, int b) {
        const double fa = point(a).objective;
        const double fb = point(b).objective;
        return fa < fb || (fa == fb && a < b);
    });
    ids.resize(static_cast<std::size_t>(std::min(size, point_count())));
    return ids;
}

void SpaceNet::snapshot_corner_objectives() {
    for (Region& region : regions_) {
        for (int j = 0; j < 4; ++j) {
            region.prev_corner_objectives[static_cast<std::size_t>(j)] =
                point(region.corner_ids[static_cast<std::size_t>(j)]).objective;
        }
    }
}

}  // namespace sno
