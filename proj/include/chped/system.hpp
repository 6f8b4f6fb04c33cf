#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "chped/error.hpp"
#include "chped/feasible_region.hpp"

namespace chped {

/// Thermal unit producing power only. Cost carries the valve-point ripple
/// |e sin(f (p_min - P))|; `cost_c3` is an optional cubic term some
/// benchmark units use (0 elsewhere).
struct PowerOnlyUnit {
    std::string name;
    double p_min = 0;
    double p_max = 0;
    double cost_a = 0;
    double cost_b = 0;
    double cost_d = 0;
    double cost_c3 = 0;
    double valve_e = 0;
    double valve_f = 0;
    double em_mu = 0;
    double em_kappa = 0;
    double em_pi = 0;
    double em_sigma = 0;
    double em_nu = 0;
    double em_co2_theta = 0;
};

struct CogenUnit {
    std::string name;
    double cost_alpha = 0;
    double cost_beta = 0;
    double cost_gamma = 0;
    double cost_delta = 0;
    double cost_eps = 0;
    double cost_xi = 0;
    double em_tau = 0;
    double em_co2_psi = 0;
    FeasibleRegion region;
};

struct HeatOnlyUnit {
    std::string name;
    double h_min = 0;
    double h_max = 0;
    double cost_phi = 0;
    double cost_eta = 0;
    double cost_lambda = 0;
    double em_rho = 0;
    double em_co2_varpi = 0;
};

/// B-coefficient transmission loss over the generation vector
/// (power-only outputs followed by cogeneration power outputs).
struct LossModel {
    bool enabled = false;
    Eigen::MatrixXd b;   // 1/MW
    Eigen::VectorXd b0;  // dimensionless
    double b00 = 0;      // MW
};

struct SystemDefinition {
    std::string id;
    std::vector<PowerOnlyUnit> power_units;
    std::vector<CogenUnit> cogen_units;
    std::vector<HeatOnlyUnit> heat_units;
    double power_demand = 0;
    double heat_demand = 0;
    LossModel loss;

    std::size_t np() const { return power_units.size(); }
    std::size_t nc() const { return cogen_units.size(); }
    std::size_t nh() const { return heat_units.size(); }
    /// Number of decision variables: p, o, h, t.
    std::size_t num_genes() const { return np() + 2 * nc() + nh(); }

    /// Checks every unit/loss invariant; throws StructuralError naming the field.
    void validate() const;
};

/// One candidate dispatch: per-unit power and heat setpoints.
template <typename Scalar>
struct BasicDispatchVector {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Vector p;  // power-only outputs, MW
    Vector o;  // cogeneration power outputs, MW
    Vector h;  // cogeneration heat outputs, MWth
    Vector t;  // heat-only outputs, MWth

    static BasicDispatchVector zeros(const SystemDefinition& sys) {
        return {Vector::Zero(sys.np()), Vector::Zero(sys.nc()), Vector::Zero(sys.nc()), Vector::Zero(sys.nh())};
    }

    /// Genes laid out as [p | o | h | t].
    static BasicDispatchVector from_genes(const Eigen::Ref<const Vector>& genes, const SystemDefinition& sys) {
        if (static_cast<std::size_t>(genes.size()) != sys.num_genes()) {
            throw StructuralError("gene vector has " + std::to_string(genes.size()) + " entries, system expects " +
                                  std::to_string(sys.num_genes()));
        }
        const Eigen::Index np = sys.np(), nc = sys.nc(), nh = sys.nh();
        return {genes.segment(0, np), genes.segment(np, nc), genes.segment(np + nc, nc),
                genes.segment(np + 2 * nc, nh)};
    }

    Vector genes() const {
        Vector g(p.size() + o.size() + h.size() + t.size());
        g << p, o, h, t;
        return g;
    }

    /// Power-producing outputs in loss-matrix order.
    Vector generation() const {
        Vector g(p.size() + o.size());
        g << p, o;
        return g;
    }

    bool matches(const SystemDefinition& sys) const {
        return static_cast<std::size_t>(p.size()) == sys.np() && static_cast<std::size_t>(o.size()) == sys.nc() &&
               static_cast<std::size_t>(h.size()) == sys.nc() && static_cast<std::size_t>(t.size()) == sys.nh();
    }

    bool all_finite() const { return p.allFinite() && o.allFinite() && h.allFinite() && t.allFinite(); }

    template <typename Other>
    BasicDispatchVector<Other> cast() const {
        return {p.template cast<Other>(), o.template cast<Other>(), h.template cast<Other>(),
                t.template cast<Other>()};
    }
};

using DispatchVector = BasicDispatchVector<double>;

/// Lower/upper box bounds per gene. Cogeneration genes use the bounding box
/// of the unit's feasible region.
struct GeneBounds {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
};

GeneBounds gene_bounds(const SystemDefinition& sys);

}  // namespace chped
