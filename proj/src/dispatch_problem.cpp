#include "chped/dispatch_problem.hpp"

#include <algorithm>

namespace chped {

std::string to_string(DispatchMode m) { return m == DispatchMode::Chped ? "chped" : "chpeed"; }

DispatchMode dispatch_mode_from_string(const std::string& name) {
    std::string low = name;
    std::transform(low.begin(), low.end(), low.begin(), [](unsigned char c) { return std::tolower(c); });
    if (low == "chped") return DispatchMode::Chped;
    if (low == "chpeed") return DispatchMode::Chpeed;
    throw StructuralError("unknown mode '" + name + "' (expected chped or chpeed)");
}

DispatchProblem::DispatchProblem(SystemDefinition sys, ConstraintConfig cfg, DispatchMode mode)
    : sys_(std::move(sys)), cfg_(cfg), mode_(mode), bounds_(gene_bounds(sys_)) {
    sys_.validate();
    cfg_.validate(sys_);
}

void DispatchProblem::evaluate(moea::Individual& ind) const {
    DispatchVector x = DispatchVector::from_genes(ind.genes, sys_);
    if (cfg_.mode == ConstraintMode::RepairThenPenalty) {
        x = repair(x, sys_, cfg_).x;
        ind.genes = x.genes();
    }
    const PenalizedObjectives pen = penalized_objectives(x, sys_, cfg_);
    if (mode_ == DispatchMode::Chped) {
        ind.objectives = Eigen::VectorXd::Constant(1, pen.cost);
    } else {
        ind.objectives = Eigen::Vector2d(pen.cost, pen.emission);
    }
    ind.violation = pen.violation > cfg_.feasibility_tol ? pen.violation : 0.0;
}

FrontArchive solve(const SystemDefinition& sys, const moea::EngineConfig& ecfg, const ConstraintConfig& ccfg,
                   DispatchMode mode) {
    const DispatchProblem problem(sys, ccfg, mode);
    moea::EngineResult res = moea::run(problem, ecfg);
    std::stable_sort(res.front.begin(), res.front.end(), [](const moea::Individual& a, const moea::Individual& b) {
        return a.objectives[0] < b.objectives[0];
    });

    FrontArchive out;
    const auto n = static_cast<Eigen::Index>(res.front.size());
    out.objectives.resize(n, 2);
    out.violation.resize(n);
    out.genes.resize(n, static_cast<Eigen::Index>(sys.num_genes()));
    for (Eigen::Index i = 0; i < n; ++i) {
        const moea::Individual& ind = res.front[static_cast<std::size_t>(i)];
        const DispatchVector x = DispatchVector::from_genes(ind.genes, sys);
        const PenalizedObjectives pen = penalized_objectives(x, sys, ccfg);
        out.objectives(i, 0) = pen.cost;
        out.objectives(i, 1) = pen.emission;
        out.violation[i] = ind.violation;
        out.genes.row(i) = ind.genes.transpose();
    }
    out.seed = ecfg.rng_seed;
    out.system_id = sys.id;
    out.algorithm = moea::to_string(ecfg.algorithm);
    out.run_id = out.algorithm + "_seed" + std::to_string(ecfg.rng_seed);
    return out;
}

}  // namespace chped
