#include "chped/moea/engine.hpp"

#include <algorithm>
#include <cmath>

#include "chped/error.hpp"
#include "chped/moea/crowding.hpp"
#include "chped/moea/fitness.hpp"
#include "chped/moea/rng.hpp"
#include "chped/moea/selection.hpp"
#include "chped/moea/sorting.hpp"
#include "chped/moea/variation.hpp"

namespace chped::moea {

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::IDBEA: return "IDBEA";
        case Algorithm::IBEA: return "IBEA";
        case Algorithm::NSGA2: return "NSGA2";
    }
    return "?";
}

Algorithm algorithm_from_string(const std::string& name) {
    std::string up = name;
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
    if (up == "IDBEA") return Algorithm::IDBEA;
    if (up == "IBEA") return Algorithm::IBEA;
    if (up == "NSGA2" || up == "NSGA-II" || up == "NSGAII") return Algorithm::NSGA2;
    throw StructuralError("unknown algorithm '" + name + "'");
}

void EngineConfig::validate() const {
    if (population_size < 4 || population_size % 2 != 0) {
        throw StructuralError("population_size must be even and >= 4, got " + std::to_string(population_size));
    }
    if (max_evaluations < population_size) throw StructuralError("max_evaluations must be >= population_size");
    if (!(crossover_prob >= 0 && crossover_prob <= 1)) throw StructuralError("crossover_prob must lie in [0, 1]");
    if (mutation_prob && !(*mutation_prob >= 0 && *mutation_prob <= 1)) {
        throw StructuralError("mutation_prob must lie in [0, 1]");
    }
    if (!(sbx_eta >= 0) || !(pm_eta >= 0)) throw StructuralError("distribution indices must be >= 0");
    if (!(kappa > 0)) throw StructuralError("kappa must be > 0");
    if (!(indicator_reference > 1)) throw StructuralError("indicator_reference must be > 1");
    if (!(archive_keep_fraction > 0 && archive_keep_fraction <= 1)) {
        throw StructuralError("archive_keep_fraction must lie in (0, 1]");
    }
}

namespace {

void check_problem(const Problem& problem) {
    const auto m = static_cast<Eigen::Index>(problem.num_genes());
    if (m == 0 || problem.lower().size() != m || problem.upper().size() != m) {
        throw StructuralError("problem bounds do not match its gene count");
    }
    if (!(problem.lower().array() <= problem.upper().array()).all() || !problem.lower().allFinite() ||
        !problem.upper().allFinite()) {
        throw StructuralError("problem bounds must be finite with lower <= upper");
    }
    if (problem.num_objectives() < 1 || problem.num_objectives() > 2) {
        throw StructuralError("engines support 1 or 2 objectives");
    }
}

VariationParams variation_params(const Problem& problem, const EngineConfig& cfg) {
    return {cfg.crossover_prob, cfg.mutation_prob.value_or(1.0 / static_cast<double>(problem.num_genes())),
            cfg.sbx_eta, cfg.pm_eta};
}

Population random_population(const Problem& problem, std::size_t n, Rng& rng) {
    Population pop(n);
    const Eigen::VectorXd& lo = problem.lower();
    const Eigen::VectorXd& hi = problem.upper();
    for (Individual& ind : pop) {
        ind.genes.resize(lo.size());
        for (Eigen::Index j = 0; j < lo.size(); ++j) ind.genes[j] = rng.uniform() * (hi[j] - lo[j]) + lo[j];
        problem.evaluate(ind);
    }
    return pop;
}

template <typename Better>
Population make_offspring(const Problem& problem, const Population& pool, std::size_t n,
                          const VariationParams& params, Rng& rng, Better better) {
    Population kids;
    kids.reserve(n);
    while (kids.size() < n) {
        const Individual& a = binary_tournament(pool, rng, better);
        const Individual& b = binary_tournament(pool, rng, better);
        auto [g1, g2] = sbx_crossover(a.genes, b.genes, problem.lower(), problem.upper(), params, rng);
        for (Eigen::VectorXd* g : {&g1, &g2}) {
            if (kids.size() == n) break;
            Individual child;
            child.genes = polynomial_mutation(*g, problem.lower(), problem.upper(), params, rng);
            problem.evaluate(child);
            kids.push_back(std::move(child));
        }
    }
    return kids;
}

Population unique_front(Population pop) {
    Population front = first_front(std::move(pop));
    Population out;
    for (Individual& ind : front) {
        const bool seen = std::any_of(out.begin(), out.end(), [&](const Individual& o) {
            return o.objectives == ind.objectives && o.violation == ind.violation;
        });
        if (!seen) out.push_back(std::move(ind));
    }
    return out;
}

// Keeps the `keep` members with the largest crowding distance; stable, so
// equal distances keep archive order. A small enough archive is untouched.
void crowding_truncate(Population& archive, std::size_t keep) {
    if (archive.size() <= keep) return;
    crowding_distance(std::span<Individual>(archive));
    std::stable_sort(archive.begin(), archive.end(),
                     [](const Individual& a, const Individual& b) { return a.crowding > b.crowding; });
    archive.resize(keep);
}

EngineResult indicator_loop(const Problem& problem, const EngineConfig& cfg, bool truncate) {
    cfg.validate();
    check_problem(problem);
    Rng rng(cfg.rng_seed);
    const VariationParams params = variation_params(problem, cfg);
    const std::size_t n = cfg.population_size;
    const auto keep = static_cast<std::size_t>(std::floor(static_cast<double>(n) * cfg.archive_keep_fraction));
    const bool multi = problem.num_objectives() > 1;

    EngineResult result;
    Population parents = random_population(problem, n, rng);
    result.evaluations = n;
    Population archive;

    while (true) {
        Population pool = std::move(parents);
        pool.insert(pool.end(), std::make_move_iterator(archive.begin()), std::make_move_iterator(archive.end()));
        const IndicatorTable table = assign_fitness(pool, cfg.kappa, cfg.indicator_reference);
        archive = environmental_selection(std::move(pool), table, n, cfg.kappa);

        if (result.evaluations >= cfg.max_evaluations) break;

        parents = make_offspring(problem, archive, n, params, rng, FitnessLess{});
        result.evaluations += n;
        ++result.generations;

        if (truncate && multi) crowding_truncate(archive, std::max<std::size_t>(keep, 1));
    }
    result.front = unique_front(std::move(archive));
    return result;
}

// Rank + crowding for every front; returns the fronts.
Fronts rank_and_crowd(Population& pop) {
    Fronts fronts = nondominated_sort(pop);
    for (const auto& f : fronts) crowding_distance(pop, f);
    return fronts;
}

}  // namespace

EngineResult idbea_run(const Problem& problem, const EngineConfig& cfg) { return indicator_loop(problem, cfg, true); }

EngineResult ibea_run(const Problem& problem, const EngineConfig& cfg) { return indicator_loop(problem, cfg, false); }

EngineResult nsga2_run(const Problem& problem, const EngineConfig& cfg) {
    cfg.validate();
    check_problem(problem);
    Rng rng(cfg.rng_seed);
    const VariationParams params = variation_params(problem, cfg);
    const std::size_t n = cfg.population_size;

    EngineResult result;
    Population pop = random_population(problem, n, rng);
    result.evaluations = n;
    rank_and_crowd(pop);

    while (result.evaluations < cfg.max_evaluations) {
        Population kids = make_offspring(problem, pop, n, params, rng, CrowdedLess{});
        result.evaluations += n;
        ++result.generations;

        pop.insert(pop.end(), std::make_move_iterator(kids.begin()), std::make_move_iterator(kids.end()));
        const Fronts fronts = rank_and_crowd(pop);
        Population next;
        next.reserve(n);
        for (const auto& f : fronts) {
            if (next.size() + f.size() <= n) {
                for (std::size_t i : f) next.push_back(pop[i]);
                continue;
            }
            std::vector<std::size_t> last(f);
            std::stable_sort(last.begin(), last.end(),
                             [&](std::size_t a, std::size_t b) { return pop[a].crowding > pop[b].crowding; });
            for (std::size_t i : last) {
                if (next.size() == n) break;
                next.push_back(pop[i]);
            }
            break;
        }
        pop = std::move(next);
        rank_and_crowd(pop);
    }
    result.front = unique_front(std::move(pop));
    return result;
}

EngineResult run(const Problem& problem, const EngineConfig& cfg) {
    switch (cfg.algorithm) {
        case Algorithm::IDBEA: return idbea_run(problem, cfg);
        case Algorithm::IBEA: return ibea_run(problem, cfg);
        case Algorithm::NSGA2: return nsga2_run(problem, cfg);
    }
    throw StructuralError("unknown algorithm");
}

}  // namespace chped::moea
