#include "chped/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "chped/error.hpp"
#include "chped/moea/hypervolume.hpp"

namespace chped {

void NormalizationBounds::validate() const {
    if (!(min.array() < max.array()).all()) throw StructuralError("normalization bounds need min < max per objective");
}

Eigen::MatrixXd NormalizationBounds::normalize(const Eigen::MatrixXd& points) const {
    validate();
    Eigen::MatrixXd out(points.rows(), 2);
    for (Eigen::Index k = 0; k < 2; ++k) out.col(k) = (points.col(k).array() - min[k]) / (max[k] - min[k]);
    return out;
}

NormalizationBounds NormalizationBounds::union_of(std::span<const Eigen::MatrixXd> fronts) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    NormalizationBounds b{Eigen::Vector2d::Constant(inf), Eigen::Vector2d::Constant(-inf)};
    for (const auto& f : fronts) {
        if (f.rows() == 0) continue;
        b.min = b.min.cwiseMin(f.colwise().minCoeff().transpose());
        b.max = b.max.cwiseMax(f.colwise().maxCoeff().transpose());
    }
    return b;
}

double hv_metric(const Eigen::MatrixXd& front, const NormalizationBounds& bounds) {
    const Eigen::MatrixXd norm = bounds.normalize(front);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < norm.rows(); ++i) {
        if ((norm.row(i).array() >= 0).all() && (norm.row(i).array() <= 1).all()) keep.push_back(i);
    }
    if (keep.empty()) return 0;
    Eigen::MatrixXd inside(static_cast<Eigen::Index>(keep.size()), 2);
    for (std::size_t r = 0; r < keep.size(); ++r) inside.row(static_cast<Eigen::Index>(r)) = norm.row(keep[r]);
    const Eigen::Vector2d ref = Eigen::Vector2d::Constant(kMetricReference);
    return moea::hypervolume_2d(inside, ref);
}

std::optional<double> spread_delta(const Eigen::MatrixXd& front, const NormalizationBounds& bounds) {
    if (front.rows() < 2) return std::nullopt;
    const Eigen::MatrixXd norm = bounds.normalize(front);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(norm.rows()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (norm(a, 0) != norm(b, 0)) return norm(a, 0) < norm(b, 0);
        return norm(a, 1) < norm(b, 1);
    });

    const std::size_t n = order.size();
    std::vector<double> gaps(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) gaps[i] = (norm.row(order[i + 1]) - norm.row(order[i])).norm();
    const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / static_cast<double>(gaps.size());
    double dev = 0;
    for (double d : gaps) dev += std::abs(d - mean);

    const Eigen::RowVector2d best_first(0.0, 1.0);
    const Eigen::RowVector2d best_second(1.0, 0.0);
    const double df = (norm.row(order.front()) - best_first).norm();
    const double dl = (norm.row(order.back()) - best_second).norm();
    const double denom = df + dl + static_cast<double>(n - 1) * mean;
    if (denom == 0) return 0.0;
    return (df + dl + dev) / denom;
}

bool surface_attains(const Eigen::MatrixXd& surface, const Eigen::Vector2d& z) {
    for (Eigen::Index i = 0; i < surface.rows(); ++i) {
        if (surface(i, 0) <= z[0] && surface(i, 1) <= z[1]) return true;
    }
    return false;
}

std::vector<AttainmentSurface> eaf_surfaces(std::span<const Eigen::MatrixXd> runs, std::span<const double> levels) {
    if (runs.size() < 2) throw StructuralError("attainment surfaces need at least 2 runs");
    for (double k : levels) {
        if (!(k > 0 && k <= 100)) throw StructuralError("attainment level " + std::to_string(k) + " outside (0, 100]");
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t r = runs.size();

    // Each run's staircase: points sorted by first objective with a running
    // minimum of the second.
    std::vector<std::vector<std::pair<double, double>>> stairs(r);
    std::vector<double> xs;
    for (std::size_t i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < runs[i].rows(); ++j) {
            stairs[i].emplace_back(runs[i](j, 0), runs[i](j, 1));
            xs.push_back(runs[i](j, 0));
        }
        std::sort(stairs[i].begin(), stairs[i].end());
        double best = inf;
        for (auto& p : stairs[i]) p.second = best = std::min(best, p.second);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    // Per candidate x, the best second objective each run attains.
    std::vector<std::vector<double>> per_x(xs.size(), std::vector<double>(r, inf));
    for (std::size_t i = 0; i < r; ++i) {
        std::size_t s = 0;
        double best = inf;
        for (std::size_t xi = 0; xi < xs.size(); ++xi) {
            while (s < stairs[i].size() && stairs[i][s].first <= xs[xi]) best = stairs[i][s++].second;
            per_x[xi][i] = best;
        }
    }
    for (auto& v : per_x) std::sort(v.begin(), v.end());

    std::vector<AttainmentSurface> out;
    for (double k : levels) {
        const auto need = static_cast<std::size_t>(
            std::max(1.0, std::ceil(k / 100.0 * static_cast<double>(r) - 1e-9)));
        std::vector<std::pair<double, double>> pts;
        double prev = inf;
        for (std::size_t xi = 0; xi < xs.size(); ++xi) {
            const double y = per_x[xi][need - 1];
            if (y < prev) {
                pts.emplace_back(xs[xi], y);
                prev = y;
            }
        }
        AttainmentSurface s{k, Eigen::MatrixXd(static_cast<Eigen::Index>(pts.size()), 2)};
        for (std::size_t i = 0; i < pts.size(); ++i) {
            s.points(static_cast<Eigen::Index>(i), 0) = pts[i].first;
            s.points(static_cast<Eigen::Index>(i), 1) = pts[i].second;
        }
        out.push_back(std::move(s));
    }
    return out;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs, double alpha) {
    std::vector<double> diffs;
    for (const auto& [a, b] : pairs) {
        if (a - b != 0) diffs.push_back(a - b);
    }
    WilcoxonResult res;
    res.n = diffs.size();
    if (diffs.empty()) return res;

    const std::size_t n = diffs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(diffs[a]) < std::abs(diffs[b]);
    });
    // Average ranks over ties, stored doubled so they stay integral.
    std::vector<long> rank2(n);
    double tie_term = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && std::abs(diffs[order[j + 1]]) == std::abs(diffs[order[i]])) ++j;
        const long doubled = static_cast<long>(i + 1 + j + 1);  // 2 * mean of ranks i+1..j+1
        for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = doubled;
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }
    long w2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (diffs[i] > 0) w2 += rank2[i];
    }
    res.w_plus = static_cast<double>(w2) / 2.0;

    if (n <= 20) {
        const long total2 = static_cast<long>(n * (n + 1));
        std::vector<double> count(static_cast<std::size_t>(total2) + 1, 0.0);
        count[0] = 1;
        for (long r2 : rank2) {
            for (long s = total2; s >= r2; --s) count[static_cast<std::size_t>(s)] += count[static_cast<std::size_t>(s - r2)];
        }
        const double all = std::ldexp(1.0, static_cast<int>(n));
        double lower = 0, upper = 0;
        for (long s = 0; s <= total2; ++s) {
            if (s <= w2) lower += count[static_cast<std::size_t>(s)];
            if (s >= w2) upper += count[static_cast<std::size_t>(s)];
        }
        res.p_value = std::min(1.0, 2.0 * std::min(lower, upper) / all);
        res.exact = true;
    } else {
        const double nn = static_cast<double>(n);
        const double mean = nn * (nn + 1) / 4.0;
        const double var = nn * (nn + 1) * (2 * nn + 1) / 24.0 - tie_term / 48.0;
        const double diff = res.w_plus - mean;
        const double corrected = diff == 0 ? 0.0 : diff - std::copysign(0.5, diff);
        const double z = var > 0 ? corrected / std::sqrt(var) : 0.0;
        res.p_value = std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
        res.exact = false;
    }
    res.reject = res.p_value < alpha;
    return res;
}

}  // namespace chped
