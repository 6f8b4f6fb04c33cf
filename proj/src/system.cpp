#include "chped/system.hpp"

#include <cmath>

namespace chped {

namespace {

void require(bool ok, const std::string& field, const std::string& message) {
    if (!ok) throw LoadError(field, message);
}

}  // namespace

void SystemDefinition::validate() const {
    require(np() + nc() + nh() > 0, "units", "system has no units");
    require(std::isfinite(power_demand) && power_demand >= 0, "demand.power", "must be finite and non-negative");
    require(std::isfinite(heat_demand) && heat_demand >= 0, "demand.heat", "must be finite and non-negative");

    for (std::size_t i = 0; i < np(); ++i) {
        const auto& u = power_units[i];
        const std::string f = "power_units[" + std::to_string(i) + "]";
        require(u.p_min >= 0 && u.p_min < u.p_max, f + ".p_min/p_max", "need 0 <= p_min < p_max");
        require(u.valve_e >= 0, f + ".valve_e", "valve-point amplitude must be non-negative");
    }
    for (std::size_t k = 0; k < nh(); ++k) {
        const auto& u = heat_units[k];
        const std::string f = "heat_units[" + std::to_string(k) + "]";
        require(u.h_min >= 0 && u.h_min < u.h_max, f + ".h_min/h_max", "need 0 <= h_min < h_max");
    }

    if (loss.enabled) {
        const auto n = static_cast<Eigen::Index>(np() + nc());
        require(loss.b.rows() == n && loss.b.cols() == n, "loss.b",
                "must be " + std::to_string(n) + "x" + std::to_string(n));
        require(loss.b0.size() == n, "loss.b0", "must have " + std::to_string(n) + " entries");
        require((loss.b - loss.b.transpose()).cwiseAbs().maxCoeff() <= 1e-12, "loss.b", "matrix is not symmetric");
        require(loss.b.allFinite() && loss.b0.allFinite() && std::isfinite(loss.b00), "loss", "non-finite coefficient");
    }
}

GeneBounds gene_bounds(const SystemDefinition& sys) {
    const std::size_t n = sys.num_genes();
    GeneBounds b{Eigen::VectorXd(n), Eigen::VectorXd(n)};
    const std::size_t np = sys.np(), nc = sys.nc();
    for (std::size_t i = 0; i < np; ++i) {
        b.lower[i] = sys.power_units[i].p_min;
        b.upper[i] = sys.power_units[i].p_max;
    }
    for (std::size_t j = 0; j < nc; ++j) {
        const Eigen::Matrix2d box = sys.cogen_units[j].region.bounding_box();
        b.lower[np + j] = box(0, 0);
        b.upper[np + j] = box(0, 1);
        b.lower[np + nc + j] = box(1, 0);
        b.upper[np + nc + j] = box(1, 1);
    }
    for (std::size_t k = 0; k < sys.nh(); ++k) {
        b.lower[np + 2 * nc + k] = sys.heat_units[k].h_min;
        b.upper[np + 2 * nc + k] = sys.heat_units[k].h_max;
    }
    return b;
}

}  // namespace chped
