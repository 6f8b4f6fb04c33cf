#pragma once

#include <utility>

#include <Eigen/Core>

#include "chped/moea/rng.hpp"

namespace chped::moea {

struct VariationParams {
    double crossover_prob = 0.9;
    double mutation_prob = 0.1;
    double sbx_eta = 20;
    double pm_eta = 20;
};

/// Bounded simulated binary crossover. With probability crossover_prob a
/// crossover event happens; each gene then recombines with probability 0.5.
std::pair<Eigen::VectorXd, Eigen::VectorXd> sbx_crossover(const Eigen::VectorXd& p1, const Eigen::VectorXd& p2,
                                                          const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                                          const VariationParams& params, Rng& rng);

/// Bounded polynomial mutation applied per gene with probability mutation_prob.
Eigen::VectorXd polynomial_mutation(const Eigen::VectorXd& x, const Eigen::VectorXd& lower,
                                    const Eigen::VectorXd& upper, const VariationParams& params, Rng& rng);

}  // namespace chped::moea
