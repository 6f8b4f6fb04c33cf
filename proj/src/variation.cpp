#include "chped/moea/variation.hpp"

#include <algorithm>
#include <cmath>

namespace chped::moea {

namespace {
constexpr double kEps = 1e-14;

double spread_factor(double beta, double eta, double u) {
    const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
    if (u <= 1.0 / alpha) return std::pow(u * alpha, 1.0 / (eta + 1.0));
    return std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
}
}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> sbx_crossover(const Eigen::VectorXd& p1, const Eigen::VectorXd& p2,
                                                          const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                                          const VariationParams& params, Rng& rng) {
    Eigen::VectorXd c1 = p1;
    Eigen::VectorXd c2 = p2;
    if (rng.uniform() >= params.crossover_prob) return {c1, c2};

    for (Eigen::Index i = 0; i < p1.size(); ++i) {
        if (rng.uniform() >= 0.5) continue;
        if (std::abs(p1[i] - p2[i]) <= kEps) continue;
        const double y1 = std::min(p1[i], p2[i]);
        const double y2 = std::max(p1[i], p2[i]);
        const double yl = lower[i];
        const double yu = upper[i];
        const double u = rng.uniform();

        const double bq1 = spread_factor(1.0 + 2.0 * (y1 - yl) / (y2 - y1), params.sbx_eta, u);
        double a = 0.5 * ((y1 + y2) - bq1 * (y2 - y1));
        const double bq2 = spread_factor(1.0 + 2.0 * (yu - y2) / (y2 - y1), params.sbx_eta, u);
        double b = 0.5 * ((y1 + y2) + bq2 * (y2 - y1));
        a = std::clamp(a, yl, yu);
        b = std::clamp(b, yl, yu);
        if (rng.uniform() <= 0.5) {
            c1[i] = b;
            c2[i] = a;
        } else {
            c1[i] = a;
            c2[i] = b;
        }
    }
    return {c1, c2};
}

Eigen::VectorXd polynomial_mutation(const Eigen::VectorXd& x, const Eigen::VectorXd& lower,
                                    const Eigen::VectorXd& upper, const VariationParams& params, Rng& rng) {
    Eigen::VectorXd y = x;
    const double power = 1.0 / (params.pm_eta + 1.0);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (rng.uniform() >= params.mutation_prob) continue;
        const double yl = lower[i];
        const double yu = upper[i];
        if (yu <= yl) {
            y[i] = yl;
            continue;
        }
        const double v = std::clamp(y[i], yl, yu);
        const double d1 = (v - yl) / (yu - yl);
        const double d2 = (yu - v) / (yu - yl);
        const double r = rng.uniform();
        double dq;
        if (r <= 0.5) {
            const double val = 2.0 * r + (1.0 - 2.0 * r) * std::pow(1.0 - d1, params.pm_eta + 1.0);
            dq = std::pow(val, power) - 1.0;
        } else {
            const double val = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * std::pow(1.0 - d2, params.pm_eta + 1.0);
            dq = 1.0 - std::pow(val, power);
        }
        y[i] = std::clamp(v + dq * (yu - yl), yl, yu);
    }
    return y;
}

}  // namespace chped::moea
