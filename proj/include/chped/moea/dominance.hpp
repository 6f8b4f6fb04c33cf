#pragma once

#include <Eigen/Core>

#include "chped/error.hpp"
#include "chped/moea/individual.hpp"

namespace chped::moea {

/// Pareto dominance for minimization: a <= b everywhere and a < b somewhere.
template <typename DerivedA, typename DerivedB>
bool dominates(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    if (a.size() != b.size()) {
        throw StructuralError("dominance between vectors of size " + std::to_string(a.size()) + " and " +
                              std::to_string(b.size()));
    }
    bool strictly = false;
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        if (a[k] > b[k]) return false;
        if (a[k] < b[k]) strictly = true;
    }
    return strictly;
}

/// Constraint domination: a smaller violation wins outright; equal
/// violations fall back to Pareto dominance.
inline bool dominates(const Individual& a, const Individual& b) {
    if (a.violation != b.violation) return a.violation < b.violation;
    return dominates(a.objectives, b.objectives);
}

}  // namespace chped::moea
