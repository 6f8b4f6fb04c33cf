#pragma once

#include <cmath>

#include "chped/system.hpp"

namespace chped {

/// Objective and constraint values of one dispatch.
struct Evaluation {
    double cost = 0;                // $
    double emission = 0;            // kg
    double loss = 0;                // MW
    double power_residual = 0;      // MW, sum(P) + sum(O) - P_D - P_L
    double heat_residual = 0;       // MWth, sum(H) + sum(T) - H_D
    double capacity_violation = 0;  // MW + MWth
};

namespace detail {
template <typename Scalar>
void check_dims(const BasicDispatchVector<Scalar>& x, const SystemDefinition& sys) {
    if (!x.matches(sys)) {
        throw StructuralError("dispatch vector dimensions (" + std::to_string(x.p.size()) + "," +
                              std::to_string(x.o.size()) + "," + std::to_string(x.h.size()) + "," +
                              std::to_string(x.t.size()) + ") do not match system '" + sys.id + "'");
    }
}
}  // namespace detail

template <typename Scalar>
Scalar power_unit_cost(const PowerOnlyUnit& u, Scalar p) {
    using std::abs;
    using std::sin;
    const Scalar ripple = abs(Scalar(u.valve_e) * sin(Scalar(u.valve_f) * (Scalar(u.p_min) - p)));
    return Scalar(u.cost_a) + Scalar(u.cost_b) * p + Scalar(u.cost_d) * p * p + Scalar(u.cost_c3) * p * p * p + ripple;
}

template <typename Scalar>
Scalar cogen_unit_cost(const CogenUnit& u, Scalar o, Scalar h) {
    return Scalar(u.cost_alpha) + Scalar(u.cost_beta) * o + Scalar(u.cost_gamma) * o * o + Scalar(u.cost_delta) * h +
           Scalar(u.cost_eps) * h * h + Scalar(u.cost_xi) * o * h;
}

template <typename Scalar>
Scalar heat_unit_cost(const HeatOnlyUnit& u, Scalar t) {
    return Scalar(u.cost_phi) + Scalar(u.cost_eta) * t + Scalar(u.cost_lambda) * t * t;
}

template <typename Scalar>
Scalar power_unit_emission(const PowerOnlyUnit& u, Scalar p) {
    using std::exp;
    return Scalar(u.em_mu) + Scalar(u.em_kappa) * p + Scalar(u.em_pi) * p * p + Scalar(u.em_sigma) * exp(Scalar(u.em_nu) * p) +
           Scalar(u.em_co2_theta) * p;
}

/// Total fuel cost over all three unit classes, valve-point ripple included.
template <typename Scalar>
Scalar total_cost(const BasicDispatchVector<Scalar>& x, const SystemDefinition& sys) {
    detail::check_dims(x, sys);
    Scalar c = 0;
    for (std::size_t i = 0; i < sys.np(); ++i) c += power_unit_cost(sys.power_units[i], x.p[i]);
    for (std::size_t j = 0; j < sys.nc(); ++j) c += cogen_unit_cost(sys.cogen_units[j], x.o[j], x.h[j]);
    for (std::size_t k = 0; k < sys.nh(); ++k) c += heat_unit_cost(sys.heat_units[k], x.t[k]);
    return c;
}

/// SO2/NOx emission plus CO2 emission. CO2 coefficients are 0 unless the
/// system file provides them.
template <typename Scalar>
Scalar total_emission(const BasicDispatchVector<Scalar>& x, const SystemDefinition& sys) {
    detail::check_dims(x, sys);
    Scalar e = 0;
    for (std::size_t i = 0; i < sys.np(); ++i) e += power_unit_emission(sys.power_units[i], x.p[i]);
    for (std::size_t j = 0; j < sys.nc(); ++j) {
        const CogenUnit& u = sys.cogen_units[j];
        e += (Scalar(u.em_tau) + Scalar(u.em_co2_psi)) * x.o[j];
    }
    for (std::size_t k = 0; k < sys.nh(); ++k) {
        const HeatOnlyUnit& u = sys.heat_units[k];
        e += (Scalar(u.em_rho) + Scalar(u.em_co2_varpi)) * x.t[k];
    }
    return e;
}

/// g'Bg + B0'g + B00 over g = (p, o); zero when the loss model is disabled.
template <typename Scalar>
Scalar transmission_loss(const BasicDispatchVector<Scalar>& x, const SystemDefinition& sys) {
    detail::check_dims(x, sys);
    if (!sys.loss.enabled) return Scalar(0);
    const auto g = x.generation();
    const auto b = sys.loss.b.template cast<Scalar>();
    const auto b0 = sys.loss.b0.template cast<Scalar>();
    return g.dot(b * g) + b0.dot(g) + Scalar(sys.loss.b00);
}

/// d(P_L)/dg for every power-producing unit, in loss-matrix order.
inline Eigen::VectorXd loss_gradient(const Eigen::VectorXd& g, const LossModel& loss) {
    if (!loss.enabled) return Eigen::VectorXd::Zero(g.size());
    return (loss.b + loss.b.transpose()) * g + loss.b0;
}

/// (power residual MW, heat residual MWth); both zero for a balanced dispatch.
template <typename Scalar>
std::pair<Scalar, Scalar> balance_residuals(const BasicDispatchVector<Scalar>& x, const SystemDefinition& sys) {
    detail::check_dims(x, sys);
    const Scalar power = x.p.sum() + x.o.sum() - Scalar(sys.power_demand) - transmission_loss(x, sys);
    const Scalar heat = x.h.sum() + x.t.sum() - Scalar(sys.heat_demand);
    return {power, heat};
}

/// Sum of box exceedances plus, per cogeneration unit, the Euclidean
/// distance from (o, h) to its feasible region.
template <typename Scalar>
Scalar capacity_violation(const BasicDispatchVector<Scalar>& x, const SystemDefinition& sys) {
    detail::check_dims(x, sys);
    using std::max;
    Scalar v = 0;
    for (std::size_t i = 0; i < sys.np(); ++i) {
        const PowerOnlyUnit& u = sys.power_units[i];
        v += max(Scalar(0), Scalar(u.p_min) - x.p[i]) + max(Scalar(0), x.p[i] - Scalar(u.p_max));
    }
    for (std::size_t j = 0; j < sys.nc(); ++j) {
        const Point2<double> q(static_cast<double>(x.o[j]), static_cast<double>(x.h[j]));
        v += Scalar(sys.cogen_units[j].region.distance(q));
    }
    for (std::size_t k = 0; k < sys.nh(); ++k) {
        const HeatOnlyUnit& u = sys.heat_units[k];
        v += max(Scalar(0), Scalar(u.h_min) - x.t[k]) + max(Scalar(0), x.t[k] - Scalar(u.h_max));
    }
    return v;
}

inline Evaluation evaluate(const DispatchVector& x, const SystemDefinition& sys) {
    Evaluation ev;
    ev.cost = total_cost(x, sys);
    ev.emission = total_emission(x, sys);
    ev.loss = transmission_loss(x, sys);
    const auto [pr, hr] = balance_residuals(x, sys);
    ev.power_residual = pr;
    ev.heat_residual = hr;
    ev.capacity_violation = capacity_violation(x, sys);
    return ev;
}

}  // namespace chped
