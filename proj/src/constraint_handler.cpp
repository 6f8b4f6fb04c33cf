#include "chped/constraint_handler.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace chped {

std::size_t default_power_slack(const SystemDefinition& sys) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < sys.np(); ++i) {
        const auto& u = sys.power_units[i];
        const auto& b = sys.power_units[best];
        if (u.p_max - u.p_min > b.p_max - b.p_min) best = i;
    }
    return best;
}

std::size_t default_heat_slack(const SystemDefinition& sys) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < sys.nh(); ++k) {
        const auto& u = sys.heat_units[k];
        const auto& b = sys.heat_units[best];
        if (u.h_max - u.h_min > b.h_max - b.h_min) best = k;
    }
    return best;
}

void ConstraintConfig::validate(const SystemDefinition& sys) const {
    if (!(loss_fixed_point_tol > 0)) throw StructuralError("constraints.loss_fixed_point_tol must be > 0");
    if (loss_fixed_point_max_iters < 1) throw StructuralError("constraints.loss_fixed_point_max_iters must be >= 1");
    if (!(penalty_weight >= 0)) throw StructuralError("constraints.penalty_weight must be >= 0");
    if (!(feasibility_tol >= 0)) throw StructuralError("constraints.feasibility_tol must be >= 0");
    if (power_slack_index && *power_slack_index >= sys.np()) {
        throw StructuralError("constraints.power_slack_index " + std::to_string(*power_slack_index) +
                              " does not name a power-only unit");
    }
    if (heat_slack_index && *heat_slack_index >= sys.nh()) {
        throw StructuralError("constraints.heat_slack_index " + std::to_string(*heat_slack_index) +
                              " does not name a heat-only unit");
    }
}

namespace {

// Unit visit order: slack first, then the remaining units of the same class
// in index order.
std::vector<std::size_t> visit_order(std::size_t count, std::optional<std::size_t> slack) {
    std::vector<std::size_t> order;
    order.reserve(count);
    if (slack && *slack < count) order.push_back(*slack);
    for (std::size_t i = 0; i < count; ++i) {
        if (!slack || i != *slack) order.push_back(i);
    }
    return order;
}

void clamp_to_limits(DispatchVector& x, const SystemDefinition& sys) {
    for (std::size_t i = 0; i < sys.np(); ++i) {
        x.p[i] = std::clamp(x.p[i], sys.power_units[i].p_min, sys.power_units[i].p_max);
    }
    for (std::size_t j = 0; j < sys.nc(); ++j) {
        const Point2<double> q = sys.cogen_units[j].region.project({x.o[j], x.h[j]});
        x.o[j] = q.x();
        x.h[j] = q.y();
    }
    for (std::size_t k = 0; k < sys.nh(); ++k) {
        x.t[k] = std::clamp(x.t[k], sys.heat_units[k].h_min, sys.heat_units[k].h_max);
    }
}

// Returns the total heat moved.
double balance_heat(DispatchVector& x, const SystemDefinition& sys, const ConstraintConfig& cfg) {
    double moved = 0;
    double needed = sys.heat_demand - x.h.sum() - x.t.sum();
    const auto slack = sys.nh() > 0 ? std::optional(cfg.heat_slack_index.value_or(default_heat_slack(sys)))
                                    : std::nullopt;
    for (std::size_t k : visit_order(sys.nh(), slack)) {
        if (needed == 0) return moved;
        const auto& u = sys.heat_units[k];
        const double next = std::clamp(x.t[k] + needed, u.h_min, u.h_max);
        needed -= next - x.t[k];
        moved += std::abs(next - x.t[k]);
        x.t[k] = next;
    }
    for (std::size_t j = 0; j < sys.nc(); ++j) {
        if (needed == 0) return moved;
        const auto range = sys.cogen_units[j].region.heat_bounds_at_power(x.o[j]);
        if (!range) continue;
        const double next = range->clamp(x.h[j] + needed);
        needed -= next - x.h[j];
        moved += std::abs(next - x.h[j]);
        x.h[j] = next;
    }
    return moved;
}

}  // namespace

RepairResult repair(const DispatchVector& input, const SystemDefinition& sys, const ConstraintConfig& cfg) {
    detail::check_dims(input, sys);
    cfg.validate(sys);

    RepairResult out{input, false, 0};
    DispatchVector& x = out.x;
    clamp_to_limits(x, sys);

    const auto slack = sys.np() > 0 ? std::optional(cfg.power_slack_index.value_or(default_power_slack(sys)))
                                    : std::nullopt;
    const std::vector<std::size_t> power_order = visit_order(sys.np(), slack);
    const std::size_t np = sys.np();

    for (int it = 0; it < cfg.loss_fixed_point_max_iters; ++it) {
        ++out.iterations;
        // Moving cogeneration power changes the heat range and vice versa, so
        // both balances are revisited every sweep.
        double moved = balance_heat(x, sys, cfg);
        const Eigen::VectorXd g = x.generation();
        const Eigen::VectorXd grad = loss_gradient(g, sys.loss);
        double needed = sys.power_demand + transmission_loss(x, sys) - g.sum();

        auto step = [&](double& value, double lo, double hi, Eigen::Index gi) {
            // Raising this unit by d also raises the loss by about grad*d.
            double denom = 1.0 - grad[gi];
            if (denom < 0.1) denom = 1.0;
            const double next = std::clamp(value + needed / denom, lo, hi);
            const double delta = next - value;
            value = next;
            needed -= delta * denom;
            moved += std::abs(delta);
        };

        for (std::size_t i : power_order) {
            if (needed == 0) break;
            const auto& u = sys.power_units[i];
            step(x.p[i], u.p_min, u.p_max, static_cast<Eigen::Index>(i));
        }
        for (std::size_t j = 0; j < sys.nc(); ++j) {
            if (needed == 0) break;
            const auto range = sys.cogen_units[j].region.power_bounds_at_heat(x.h[j]);
            if (!range) continue;
            step(x.o[j], range->lo, range->hi, static_cast<Eigen::Index>(np + j));
        }
        if (moved < cfg.loss_fixed_point_tol) {
            out.converged = true;
            break;
        }
    }
    return out;
}

double total_violation(const Evaluation& ev) {
    return std::abs(ev.power_residual) + std::abs(ev.heat_residual) + ev.capacity_violation;
}

PenalizedObjectives penalized_objectives(const DispatchVector& x, const SystemDefinition& sys,
                                         const ConstraintConfig& cfg) {
    const Evaluation ev = evaluate(x, sys);
    const double violation = total_violation(ev);
    const double penalty = violation > cfg.feasibility_tol ? cfg.penalty_weight * violation : 0.0;
    return {ev.cost + penalty, ev.emission + penalty, violation, ev};
}

}  // namespace chped
