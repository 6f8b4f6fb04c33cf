#include <doctest.h>

#include <cmath>

#include "chped/dispatch_problem.hpp"
#include "chped/moea/dominance.hpp"
#include "chped/moea/engine.hpp"
#include "support.hpp"

using namespace chped;
using namespace chped::moea;

namespace {

// Two-objective test function with a convex front f2 = 1 - sqrt(f1) at g = 1.
class Zdt1 : public Problem {
public:
    explicit Zdt1(std::size_t n) : lo_(Eigen::VectorXd::Zero(n)), hi_(Eigen::VectorXd::Ones(n)) {}
    std::size_t num_genes() const override { return lo_.size(); }
    std::size_t num_objectives() const override { return 2; }
    const Eigen::VectorXd& lower() const override { return lo_; }
    const Eigen::VectorXd& upper() const override { return hi_; }
    void evaluate(Individual& ind) const override {
        const double f1 = ind.genes[0];
        const double g = 1 + 9 * ind.genes.tail(ind.genes.size() - 1).mean();
        ind.objectives = Eigen::Vector2d(f1, g * (1 - std::sqrt(f1 / g)));
        ind.violation = 0;
    }

private:
    Eigen::VectorXd lo_, hi_;
};

EngineConfig small(Algorithm alg, std::uint64_t seed = 3) {
    EngineConfig c;
    c.algorithm = alg;
    c.population_size = 40;
    c.max_evaluations = 4000;
    c.rng_seed = seed;
    return c;
}

bool same_front(const Population& a, const Population& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].genes != b[i].genes || a[i].objectives != b[i].objectives) return false;
    }
    return true;
}

void check_mutually_nondominated(const Population& front) {
    for (std::size_t i = 0; i < front.size(); ++i) {
        for (std::size_t j = 0; j < front.size(); ++j) {
            if (i != j) CHECK_FALSE(dominates(front[i], front[j]));
        }
    }
}

}  // namespace

TEST_SUITE("engine") {
    TEST_CASE("config validation") {
        EngineConfig c;
        CHECK_NOTHROW(c.validate());
        c.population_size = 7;
        CHECK_THROWS_AS(c.validate(), StructuralError);
        c.population_size = 2;
        CHECK_THROWS_AS(c.validate(), StructuralError);
        c = {};
        c.crossover_prob = 1.5;
        CHECK_THROWS_AS(c.validate(), StructuralError);
        c = {};
        c.mutation_prob = -0.1;
        CHECK_THROWS_AS(c.validate(), StructuralError);
        c = {};
        c.kappa = 0;
        CHECK_THROWS_AS(c.validate(), StructuralError);
        c = {};
        c.archive_keep_fraction = 0;
        CHECK_THROWS_AS(c.validate(), StructuralError);
        c = {};
        c.indicator_reference = 1;
        CHECK_THROWS_AS(c.validate(), StructuralError);
        CHECK(algorithm_from_string("nsga-ii") == Algorithm::NSGA2);
        CHECK(algorithm_from_string("idbea") == Algorithm::IDBEA);
        CHECK_THROWS_AS(algorithm_from_string("spea2"), StructuralError);
    }

    TEST_CASE("invalid config fails before any evaluation") {
        struct Counting : Zdt1 {
            using Zdt1::Zdt1;
            mutable int calls = 0;
            void evaluate(Individual& ind) const override {
                ++calls;
                Zdt1::evaluate(ind);
            }
        } problem(5);
        EngineConfig c = small(Algorithm::IDBEA);
        c.kappa = -1;
        CHECK_THROWS_AS(run(problem, c), StructuralError);
        CHECK(problem.calls == 0);
    }

    TEST_CASE("seeded runs are reproducible and seeds matter") {
        const Zdt1 problem(6);
        for (Algorithm alg : {Algorithm::IDBEA, Algorithm::IBEA, Algorithm::NSGA2}) {
            const EngineResult a = run(problem, small(alg));
            const EngineResult b = run(problem, small(alg));
            const EngineResult c = run(problem, small(alg, 4));
            CHECK(same_front(a.front, b.front));
            CHECK_FALSE(same_front(a.front, c.front));
            CHECK(a.evaluations == 4000);
            CHECK(a.generations == 99);
        }
    }

    TEST_CASE("fronts are mutually non-dominated and approach the true front") {
        const Zdt1 problem(6);
        for (Algorithm alg : {Algorithm::IDBEA, Algorithm::IBEA, Algorithm::NSGA2}) {
            EngineConfig c = small(alg);
            c.max_evaluations = 10000;
            const EngineResult r = run(problem, c);
            CHECK(r.front.size() >= 10);
            check_mutually_nondominated(r.front);
            double worst_gap = 0;
            for (const auto& ind : r.front) {
                worst_gap = std::max(worst_gap, ind.objectives[1] - (1 - std::sqrt(ind.objectives[0])));
            }
            CHECK(worst_gap < 0.2);
        }
    }

    TEST_CASE("IBEA is IDBEA with nothing truncated") {
        const Zdt1 problem(6);
        EngineConfig c = small(Algorithm::IDBEA);
        c.archive_keep_fraction = 1;
        const EngineResult a = idbea_run(problem, c);
        const EngineResult b = ibea_run(problem, c);
        CHECK(same_front(a.front, b.front));
    }

    TEST_CASE("dispatch problem: repaired genes reproduce the cached objectives") {
        const auto& s3 = test::bundled(3);
        const DispatchProblem problem(s3, ConstraintConfig{}, DispatchMode::Chpeed);
        EngineConfig c = small(Algorithm::IDBEA);
        c.max_evaluations = 2000;
        const EngineResult r = run(problem, c);
        check_mutually_nondominated(r.front);
        for (const auto& ind : r.front) {
            const Evaluation ev = evaluate(DispatchVector::from_genes(ind.genes, s3), s3);
            CHECK(ind.objectives[0] == ev.cost);
            CHECK(ind.objectives[1] == ev.emission);
            CHECK(ind.violation == 0);
            CHECK(total_violation(ev) < 1e-6);
        }
    }

    TEST_CASE("single-objective mode collapses to cost") {
        const auto& s1 = test::bundled(1);
        ConstraintConfig cc;
        const DispatchProblem problem(s1, cc, DispatchMode::Chped);
        CHECK(problem.num_objectives() == 1);
        EngineConfig c = small(Algorithm::IDBEA);
        c.max_evaluations = 2000;
        const FrontArchive fa = solve(s1, c, cc, DispatchMode::Chped);
        CHECK(fa.size() == 1);
        CHECK(fa.objectives(0, 0) < 9400);
        CHECK(fa.objectives.cols() == 2);
    }

    TEST_CASE("solve sorts by cost and keeps feasible members") {
        EngineConfig c = small(Algorithm::NSGA2);
        c.max_evaluations = 2000;
        const FrontArchive fa = solve(test::bundled(2), c, ConstraintConfig{});
        for (Eigen::Index i = 1; i < fa.objectives.rows(); ++i) CHECK(fa.objectives(i - 1, 0) <= fa.objectives(i, 0));
        CHECK(fa.violation.maxCoeff() == 0);
        CHECK(fa.seed == 3);
    }
}
