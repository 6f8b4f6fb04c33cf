#pragma once

#include <cstdint>
#include <string>

#include "chped/constraint_handler.hpp"
#include "chped/moea/engine.hpp"
#include "chped/moea/problem.hpp"
#include "chped/system.hpp"

namespace chped {

/// chped minimizes cost alone; chpeed minimizes (cost, emission).
enum class DispatchMode { Chped, Chpeed };

std::string to_string(DispatchMode m);
DispatchMode dispatch_mode_from_string(const std::string& name);

/// Dispatch system exposed to the engines. Genes are [p | o | h | t];
/// every candidate is repaired (unless the constraint mode is penalty-only)
/// and the repaired genes replace the originals.
class DispatchProblem : public moea::Problem {
public:
    DispatchProblem(SystemDefinition sys, ConstraintConfig cfg, DispatchMode mode);

    std::size_t num_genes() const override { return sys_.num_genes(); }
    std::size_t num_objectives() const override { return mode_ == DispatchMode::Chped ? 1 : 2; }
    const Eigen::VectorXd& lower() const override { return bounds_.lower; }
    const Eigen::VectorXd& upper() const override { return bounds_.upper; }
    void evaluate(moea::Individual& ind) const override;

    const SystemDefinition& system() const { return sys_; }
    const ConstraintConfig& constraints() const { return cfg_; }
    DispatchMode mode() const { return mode_; }

private:
    SystemDefinition sys_;
    ConstraintConfig cfg_;
    DispatchMode mode_;
    GeneBounds bounds_;
};

/// One run's final front: objectives are always (cost, emission) so fronts
/// from either mode share a layout; `genes` rows are [p | o | h | t].
struct FrontArchive {
    Eigen::MatrixXd objectives;  // n x 2: cost $, emission kg
    Eigen::VectorXd violation;   // n
    Eigen::MatrixXd genes;       // n x num_genes
    std::string run_id;
    std::uint64_t seed = 0;
    std::string system_id;
    std::string algorithm;

    std::size_t size() const { return static_cast<std::size_t>(objectives.rows()); }
};

/// Runs the configured engine on `sys` and packages its front.
FrontArchive solve(const SystemDefinition& sys, const moea::EngineConfig& ecfg, const ConstraintConfig& ccfg,
                   DispatchMode mode = DispatchMode::Chpeed);

}  // namespace chped
