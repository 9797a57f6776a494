#pragma once

#include <array>
#include <span>
#include <vector>

namespace sno {

/// One node of the space net: a position, its cached objective, and a fixed
/// slot in the logical grid. The objective only ever decreases (replacement
/// happens on improvement only).
struct ElasticPoint {
    std::vector<double> position;
    double objective = 0.0;
    int grid_row = 0;
    int grid_col = 0;
};

/// A grid cell. Membership is topological (index based) and fixed for the
/// whole run; the four corners of cell (i, j) are grid nodes (i, j), (i, j+1),
/// (i+1, j), (i+1, j+1).
struct Region {
    std::array<int, 4> corner_ids{};
    long long visits_a = 1;  // times selected
    long long visits_b = 1;  // times not selected
    std::array<double, 4> prev_corner_objectives{};
    double alpha = 0.5;  // crossover rate
    double beta = 0.1;   // scaling factor
};

/// Raw per-region inputs to the expected-value formula.
struct RegionStats {
    double visit_ratio;      // visits_b / visits_a
    double improvement;      // sum over corners of (previous - current objective)
    double best_objective;   // current best corner objective
};

/// e_i = N(ratio) + N(improvement) + (2 - delta) * (1 - N(best)), with N a
/// per-term min-max normalization across regions; a degenerate term
/// (max == min) normalizes to 0.5 for every region.
std::vector<double> expected_values_from_stats(std::span<const RegionStats> stats, double delta);

class SpaceNet {
public:
    /// Builds the grid topology for n_points elastic points; n_points must be
    /// a perfect square >= 4. Positions/objectives are filled in later by the
    /// optimizer's initialization.
    SpaceNet(int n_points, double alpha_init, double beta_init);

    int point_count() const { return static_cast<int>(points_.size()); }
    int grid_width() const { return grid_width_; }
    int region_count() const { return static_cast<int>(regions_.size()); }

    ElasticPoint& point(int id) { return points_[static_cast<std::size_t>(id)]; }
    const ElasticPoint& point(int id) const { return points_[static_cast<std::size_t>(id)]; }
    Region& region(int id) { return regions_[static_cast<std::size_t>(id)]; }
    const Region& region(int id) const { return regions_[static_cast<std::size_t>(id)]; }
    const std::vector<ElasticPoint>& points() const { return points_; }
    const std::vector<Region>& regions() const { return regions_; }

    /// Regions whose corner lists contain the point: 1, 2, or 4 of them
    /// depending on corner/edge/interior grid position.
    const std::vector<int>& regions_of(int point_id) const {
        return containing_regions_[static_cast<std::size_t>(point_id)];
    }
    /// Lowest-index region containing the point.
    int home_region(int point_id) const { return regions_of(point_id).front(); }

    /// Elastic index of the region's minimum-objective corner.
    int best_corner(int region_id) const;

    std::vector<RegionStats> raw_stats() const;

    /// Computes this iteration's expected values and then refreshes the
    /// previous-corner-objectives snapshot, so the improvement term always
    /// covers exactly one iteration of net movement. On the first call after
    /// initialization the improvement term is zero.
    std::vector<double> expected_values(double delta);

    /// Selected region's visits_a and every other region's visits_b += 1.
    void record_visit(int selected_region);

    /// Indices of the `count` points nearest to nu, ascending by Euclidean
    /// distance, ties broken by lower index.
    std::vector<int> nearest_points(std::span<const double> nu, int count) const;

    /// The max(1, floor(rho * n_p)) lowest-objective points, best first,
    /// ties broken by lower index.
    std::vector<int> top_pool(double rho) const;

    /// prev corner objectives := current. Called once at initialization.
    void snapshot_corner_objectives();

private:
    int grid_width_;
    std::vector<ElasticPoint> points_;
    std::vector<Region> regions_;
    std::vector<std::vector<int>> containing_regions_;
};

}  // namespace sno
