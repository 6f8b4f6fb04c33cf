#pragma once

#include <optional>

#include "chped/dispatch_model.hpp"
#include "chped/system.hpp"

namespace chped {

enum class ConstraintMode { RepairThenPenalty, PenaltyOnly };

struct ConstraintConfig {
    ConstraintMode mode = ConstraintMode::RepairThenPenalty;
    /// Power-only unit absorbing the power residual; unset picks the
    /// largest-capacity power-only unit.
    std::optional<std::size_t> power_slack_index;
    /// Heat-only unit absorbing the heat residual; unset picks the
    /// largest-capacity heat-only unit.
    std::optional<std::size_t> heat_slack_index;
    double loss_fixed_point_tol = 1e-6;
    int loss_fixed_point_max_iters = 50;
    double penalty_weight = 1e4;
    /// Violations below this count as feasible (no penalty).
    double feasibility_tol = 1e-6;

    void validate(const SystemDefinition& sys) const;
};

struct RepairResult {
    DispatchVector x;
    bool converged = true;
    int iterations = 0;
};

/// Makes `x` satisfy box/region limits and, as far as the slack units
/// allow, the power and heat balances.
///
/// Steps: clamp boxes and project cogeneration points onto their regions,
/// then sweep until the total adjustment drops below the tolerance. A sweep
/// moves the heat slack (then other heat-only units, then cogeneration heat
/// at fixed power) to close the heat balance, then the power slack (then
/// other power-only units, then cogeneration power at fixed heat) against
/// the loss-coupled power balance. Each power step is a Newton step on the unit being moved,
/// so a feasible input is a fixed point to round-off.
RepairResult repair(const DispatchVector& x, const SystemDefinition& sys, const ConstraintConfig& cfg);

struct PenalizedObjectives {
    double cost;
    double emission;
    double violation;
    Evaluation raw;
};

/// Evaluates `x` as given (no repair) and adds penalty_weight * violation to
/// both objectives when violation exceeds `feasibility_tol`.
PenalizedObjectives penalized_objectives(const DispatchVector& x, const SystemDefinition& sys,
                                         const ConstraintConfig& cfg);

/// |power residual| + |heat residual| + capacity violation.
double total_violation(const Evaluation& ev);

std::size_t default_power_slack(const SystemDefinition& sys);
std::size_t default_heat_slack(const SystemDefinition& sys);

}  // namespace chped
