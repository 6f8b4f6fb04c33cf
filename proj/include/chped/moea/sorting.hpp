#pragma once

#include <vector>

#include "chped/moea/individual.hpp"

namespace chped::moea {

using Fronts = std::vector<std::vector<std::size_t>>;

/// Fast non-dominated sort under constraint domination. Sets each
/// individual's `rank` and returns indices grouped by front.
Fronts nondominated_sort(Population& pop);

/// Members of the first front, in population order.
Population first_front(Population pop);

}  // namespace chped::moea
