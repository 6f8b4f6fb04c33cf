#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace chped {

/// Hypervolume reference on normalized objectives.
inline constexpr double kMetricReference = 1.1;

/// Per-objective (min, max) mapping raw objectives onto [0, 1].
struct NormalizationBounds {
    Eigen::Vector2d min;
    Eigen::Vector2d max;

    void validate() const;
    Eigen::MatrixXd normalize(const Eigen::MatrixXd& points) const;

    /// Componentwise min/max over every row of every front.
    static NormalizationBounds union_of(std::span<const Eigen::MatrixXd> fronts);
};

/// Hypervolume of the normalized front against (1.1, 1.1); points that
/// normalize outside [0, 1]^2 are discarded.
double hv_metric(const Eigen::MatrixXd& front, const NormalizationBounds& bounds);

/// Spread: (d_f + d_l + sum |d_i - mean d|) / (d_f + d_l + (n - 1) mean d) on
/// normalized points sorted by the first objective, where d_f and d_l are
/// distances from the extreme members to the corner points (0, 1) and (1, 0).
/// Absent for fewer than two points.
std::optional<double> spread_delta(const Eigen::MatrixXd& front, const NormalizationBounds& bounds);

struct AttainmentSurface {
    double level;            // percent of runs
    Eigen::MatrixXd points;  // minimal points of the staircase, ascending first objective
};

/// k%-attainment surfaces of a set of two-objective runs: the boundary of
/// the region weakly dominated by at least ceil(k/100 * runs) of the runs.
std::vector<AttainmentSurface> eaf_surfaces(std::span<const Eigen::MatrixXd> runs, std::span<const double> levels);

/// True if some minimal point of `surface` weakly dominates `z`.
bool surface_attains(const Eigen::MatrixXd& surface, const Eigen::Vector2d& z);

struct WilcoxonResult {
    double p_value = 1;
    bool reject = false;
    double w_plus = 0;   // rank sum of positive differences (first - second)
    std::size_t n = 0;   // non-zero differences
    bool exact = true;
};

/// Two-sided Wilcoxon signed-rank test. Exact null distribution (with
/// average ranks for ties) for n <= 20, normal approximation with tie and
/// continuity correction above.
WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs, double alpha);

}  // namespace chped
