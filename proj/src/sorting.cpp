#include "chped/moea/sorting.hpp"

#include "chped/moea/dominance.hpp"

namespace chped::moea {

Fronts nondominated_sort(Population& pop) {
    const std::size_t n = pop.size();
    std::vector<std::vector<std::size_t>> dominated_by_me(n);
    std::vector<std::size_t> domination_count(n, 0);
    Fronts fronts;
    if (n == 0) return fronts;
    fronts.emplace_back();

    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            if (dominates(pop[p], pop[q])) {
                dominated_by_me[p].push_back(q);
                ++domination_count[q];
            } else if (dominates(pop[q], pop[p])) {
                dominated_by_me[q].push_back(p);
                ++domination_count[p];
            }
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        if (domination_count[p] == 0) {
            pop[p].rank = 0;
            fronts[0].push_back(p);
        }
    }
    for (std::size_t f = 0; !fronts[f].empty(); ++f) {
        std::vector<std::size_t> next;
        for (std::size_t p : fronts[f]) {
            for (std::size_t q : dominated_by_me[p]) {
                if (--domination_count[q] == 0) {
                    pop[q].rank = static_cast<int>(f + 1);
                    next.push_back(q);
                }
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

Population first_front(Population pop) {
    const Fronts fronts = nondominated_sort(pop);
    Population out;
    if (fronts.empty()) return out;
    out.reserve(fronts[0].size());
    for (std::size_t i : fronts[0]) out.push_back(std::move(pop[i]));
    return out;
}

}  // namespace chped::moea
