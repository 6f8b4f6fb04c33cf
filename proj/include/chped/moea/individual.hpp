#pragma once

#include <limits>
#include <vector>

#include <Eigen/Core>

namespace chped::moea {

inline constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

struct Individual {
    Eigen::VectorXd genes;
    Eigen::VectorXd objectives;  // minimized
    double violation = 0;        // 0 when feasible
    double fitness = 0;          // indicator fitness, larger is worse
    double crowding = 0;
    int rank = -1;
};

using Population = std::vector<Individual>;

/// Objectives stacked row-wise (one row per individual).
inline Eigen::MatrixXd objective_matrix(const Population& pop) {
    if (pop.empty()) return {};
    Eigen::MatrixXd m(pop.size(), pop.front().objectives.size());
    for (std::size_t i = 0; i < pop.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = pop[i].objectives.transpose();
    return m;
}

}  // namespace chped::moea
