#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "chped/moea/individual.hpp"
#include "chped/moea/problem.hpp"

namespace chped::moea {

enum class Algorithm { IDBEA, IBEA, NSGA2 };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

struct EngineConfig {
    Algorithm algorithm = Algorithm::IDBEA;
    std::size_t population_size = 200;
    std::size_t max_evaluations = 25000;
    double crossover_prob = 0.9;
    /// Per-gene mutation probability; unset means 1 / number of genes.
    std::optional<double> mutation_prob;
    double sbx_eta = 20;
    double pm_eta = 20;
    double kappa = 0.05;
    /// Reference coordinate for the fitness indicator on normalized objectives.
    double indicator_reference = 2.0;
    /// Fraction of the archive kept by crowding truncation (IDBEA only).
    double archive_keep_fraction = 0.8;
    std::uint64_t rng_seed = 1;

    void validate() const;
};

struct EngineResult {
    Population front;  // first non-dominated front, duplicates removed
    std::size_t evaluations = 0;
    std::size_t generations = 0;
};

/// Indicator- and crowding-distance-based loop: indicator environmental
/// selection into the archive, binary tournament on the archive, SBX plus
/// polynomial mutation, then crowding truncation of the archive to
/// floor(N * archive_keep_fraction). Truncation is skipped for a single
/// objective.
EngineResult idbea_run(const Problem& problem, const EngineConfig& cfg);

/// The same loop without crowding truncation.
EngineResult ibea_run(const Problem& problem, const EngineConfig& cfg);

/// Generational NSGA-II with the crowded comparison operator.
EngineResult nsga2_run(const Problem& problem, const EngineConfig& cfg);

/// Dispatches on `cfg.algorithm`.
EngineResult run(const Problem& problem, const EngineConfig& cfg);

}  // namespace chped::moea
