#pragma once

#include <span>
#include <vector>

#include "chped/moea/individual.hpp"

namespace chped::moea {

/// Crowding distance over `front`, written into each member's `crowding`.
/// Boundary members of every objective get +inf; an objective with zero
/// range adds nothing for interior members.
void crowding_distance(std::span<Individual> front);

/// Same, restricted to the members of `pop` listed in `members`.
void crowding_distance(Population& pop, const std::vector<std::size_t>& members);

}  // namespace chped::moea
