#include "chped/moea/crowding.hpp"

#include <algorithm>
#include <numeric>

namespace chped::moea {

void crowding_distance(Population& pop, const std::vector<std::size_t>& members) {
    const std::size_t s = members.size();
    for (std::size_t i : members) pop[i].crowding = 0.0;
    if (s == 0) return;
    const Eigen::Index m = pop[members[0]].objectives.size();

    std::vector<std::size_t> order(members);
    for (Eigen::Index n = 0; n < m; ++n) {
        // Ties on objective n break on the remaining objectives so the
        // result does not depend on input order.
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const auto& oa = pop[a].objectives;
            const auto& ob = pop[b].objectives;
            if (oa[n] != ob[n]) return oa[n] < ob[n];
            return std::lexicographical_compare(oa.begin(), oa.end(), ob.begin(), ob.end());
        });
        pop[order.front()].crowding = kInfiniteDistance;
        pop[order.back()].crowding = kInfiniteDistance;
        const double range = pop[order.back()].objectives[n] - pop[order.front()].objectives[n];
        if (range <= 0) continue;
        for (std::size_t i = 1; i + 1 < s; ++i) {
            pop[order[i]].crowding += (pop[order[i + 1]].objectives[n] - pop[order[i - 1]].objectives[n]) / range;
        }
    }
}

void crowding_distance(std::span<Individual> front) {
    Population tmp(front.begin(), front.end());
    std::vector<std::size_t> all(tmp.size());
    std::iota(all.begin(), all.end(), 0);
    crowding_distance(tmp, all);
    for (std::size_t i = 0; i < tmp.size(); ++i) front[i].crowding = tmp[i].crowding;
}

}  // namespace chped::moea
