#include "chped/moea/fitness.hpp"

#include <cmath>

#include "chped/error.hpp"
#include "chped/moea/dominance.hpp"

namespace chped::moea {

Eigen::MatrixXd normalized_objectives(const Population& pop) {
    Eigen::MatrixXd m = objective_matrix(pop);
    if (m.rows() == 0) return m;
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
        const double lo = m.col(k).minCoeff();
        const double hi = m.col(k).maxCoeff();
        if (hi > lo) {
            m.col(k) = (m.col(k).array() - lo) / (hi - lo);
        } else {
            m.col(k).setZero();
        }
    }
    return m;
}

double singleton_indicator(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double ref) {
    // Box volumes against the reference; the union of two boxes overlaps in
    // the box of their componentwise maximum.
    const double vol_b = (ref - b.array()).prod();
    if (dominates(a, b)) return vol_b - (ref - a.array()).prod();
    return vol_b - (ref - a.array().max(b.array())).prod();
}

IndicatorTable indicator_table(const Population& pop, double ref) {
    const Eigen::MatrixXd norm = normalized_objectives(pop);
    const auto n = static_cast<Eigen::Index>(pop.size());
    IndicatorTable table{Eigen::MatrixXd::Zero(n, n), 1.0};
    double max_abs = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd a = norm.row(i).transpose();
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            const double v = singleton_indicator(a, norm.row(j).transpose(), ref);
            table.values(i, j) = v;
            max_abs = std::max(max_abs, std::abs(v));
        }
    }
    if (max_abs > 0) {
        table.scale = max_abs;
        table.values /= max_abs;
    }
    return table;
}

IndicatorTable assign_fitness(Population& pop, double kappa, double ref) {
    if (pop.size() < 2) throw StructuralError("fitness assignment needs at least 2 individuals");
    IndicatorTable table = indicator_table(pop, ref);
    const auto n = static_cast<Eigen::Index>(pop.size());
    for (Eigen::Index x = 0; x < n; ++x) {
        double f = 0;
        for (Eigen::Index y = 0; y < n; ++y) {
            if (y != x) f += std::exp(-table.values(y, x) / kappa);
        }
        pop[static_cast<std::size_t>(x)].fitness = f;
    }
    return table;
}

Population environmental_selection(Population pool, const IndicatorTable& table, std::size_t n, double kappa) {
    if (pool.size() < n) {
        throw StructuralError("environmental selection: pool of " + std::to_string(pool.size()) +
                              " is smaller than target " + std::to_string(n));
    }
    if (table.values.rows() != static_cast<Eigen::Index>(pool.size())) {
        throw StructuralError("environmental selection: indicator table does not match pool");
    }
    std::vector<std::size_t> alive(pool.size());
    for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;

    while (alive.size() > n) {
        std::size_t worst_pos = 0;
        for (std::size_t k = 1; k < alive.size(); ++k) {
            if (pool[alive[k]].fitness > pool[alive[worst_pos]].fitness) worst_pos = k;
        }
        const auto worst = static_cast<Eigen::Index>(alive[worst_pos]);
        alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(worst_pos));
        for (std::size_t idx : alive) {
            pool[idx].fitness -= std::exp(-table.values(worst, static_cast<Eigen::Index>(idx)) / kappa);
        }
    }

    Population kept;
    kept.reserve(alive.size());
    for (std::size_t idx : alive) kept.push_back(std::move(pool[idx]));
    return kept;
}

}  // namespace chped::moea
