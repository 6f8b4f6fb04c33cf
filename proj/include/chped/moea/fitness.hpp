#pragma once

#include <Eigen/Core>

#include "chped/moea/individual.hpp"

namespace chped::moea {

/// Default indicator reference on min-max normalized objectives. Points
/// at the population's extremes keep a worthwhile share of volume at 2;
/// at 1.1 they lose out to interior points and the front contracts.
inline constexpr double kIndicatorReference = 2.0;

/// Pairwise hypervolume-difference indicator values over a population.
/// `values(i, j)` is I({x_i}, {x_j}) on normalized objectives, divided by
/// `scale` (the largest |I| over all pairs, or 1 if every value is 0).
struct IndicatorTable {
    Eigen::MatrixXd values;
    double scale = 1;
};

/// Objectives min-max normalized per column over the population; a
/// constant column maps to 0.
Eigen::MatrixXd normalized_objectives(const Population& pop);

/// I({a},{b}) for singletons with reference `ref` in every coordinate.
double singleton_indicator(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double ref = kIndicatorReference);

IndicatorTable indicator_table(const Population& pop, double ref = kIndicatorReference);

/// Indicator fitness: F(x) = sum over y != x of exp(-I({y},{x}) / kappa),
/// with I already divided by the table scale. Larger F is worse; an
/// individual dominated by others accumulates large terms.
IndicatorTable assign_fitness(Population& pop, double kappa, double ref = kIndicatorReference);

/// Removes the largest-fitness individual (first one on ties) and
/// subtracts its contribution from the others, until `n` remain.
/// Expects fitness assigned by `assign_fitness` with the same `table`.
Population environmental_selection(Population pool, const IndicatorTable& table, std::size_t n, double kappa);

}  // namespace chped::moea
