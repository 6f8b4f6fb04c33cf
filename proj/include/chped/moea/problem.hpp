#pragma once

#include <Eigen/Core>

#include "chped/moea/individual.hpp"

namespace chped::moea {

/// A box-bounded minimization problem as seen by the engines.
class Problem {
public:
    virtual ~Problem() = default;

    virtual std::size_t num_genes() const = 0;
    virtual std::size_t num_objectives() const = 0;
    virtual const Eigen::VectorXd& lower() const = 0;
    virtual const Eigen::VectorXd& upper() const = 0;

    /// Fills objectives and violation from `ind.genes`. May rewrite the genes
    /// (repair); the stored genes must reproduce the stored objectives.
    virtual void evaluate(Individual& ind) const = 0;
};

}  // namespace chped::moea
