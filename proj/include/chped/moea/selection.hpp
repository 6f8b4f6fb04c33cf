#pragma once

#include "chped/error.hpp"
#include "chped/moea/individual.hpp"
#include "chped/moea/rng.hpp"

namespace chped::moea {

/// Lower indicator fitness wins.
struct FitnessLess {
    bool operator()(const Individual& a, const Individual& b) const { return a.fitness < b.fitness; }
};

/// Lower rank wins, then larger crowding distance.
struct CrowdedLess {
    bool operator()(const Individual& a, const Individual& b) const {
        if (a.rank != b.rank) return a.rank < b.rank;
        return a.crowding > b.crowding;
    }
};

/// Samples two members uniformly (with replacement) and returns the better
/// one under `better`; ties go to the first sample.
template <typename Better = FitnessLess>
const Individual& binary_tournament(const Population& pool, Rng& rng, Better better = {}) {
    if (pool.empty()) throw StructuralError("binary tournament on an empty pool");
    const Individual& a = pool[rng.index(pool.size())];
    const Individual& b = pool[rng.index(pool.size())];
    return better(b, a) ? b : a;
}

}  // namespace chped::moea
