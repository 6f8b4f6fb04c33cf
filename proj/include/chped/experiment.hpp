#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chped/constraint_handler.hpp"
#include "chped/dispatch_problem.hpp"
#include "chped/metrics.hpp"
#include "chped/moea/engine.hpp"

namespace chped {

/// Environment variable that, when set, prefixes relative output directories.
inline constexpr const char* kOutputRootEnv = "CHPED_OUTPUT_ROOT";

struct ExperimentConfig {
    std::string id;
    std::filesystem::path system_path;
    DispatchMode mode = DispatchMode::Chpeed;
    std::size_t repetitions = 1;
    std::uint64_t seed_base = 1;
    std::filesystem::path output_dir;
    ConstraintConfig constraints;
    std::vector<moea::EngineConfig> algorithms;  // rng_seed is overwritten per run
    std::size_t jobs = 1;                         // concurrent runs; 0 = hardware threads
    nlohmann::json source;                        // the parsed file, echoed into the manifest

    void validate() const;
};

ConstraintConfig constraints_from_json(const nlohmann::json& j);
nlohmann::json constraints_to_json(const ConstraintConfig& c);
moea::EngineConfig engine_from_json(const nlohmann::json& j);
nlohmann::json engine_to_json(const moea::EngineConfig& c);

/// `base_dir` resolves a relative system path.
ExperimentConfig experiment_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
ExperimentConfig load_experiment(const std::filesystem::path& path);

/// output_dir, prefixed with $CHPED_OUTPUT_ROOT when set and output_dir is relative.
std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg);

struct RunRecord {
    std::string experiment_id;
    std::string algorithm;
    std::uint64_t seed = 0;
    double wall_time_s = 0;
    std::size_t evaluations = 0;
    FrontArchive front;
    // Row indices into `front`.
    Eigen::Index best_cost = 0;
    Eigen::Index best_emission = 0;
    Eigen::Index compromise = 0;
};

/// Row minimizing the largest objective after min-max normalization over the
/// front; ties go to the lower cost. Constant objectives normalize to 0.
Eigen::Index select_compromise(const Eigen::MatrixXd& objectives);

/// Fills best_cost, best_emission and compromise from the front.
void annotate(RunRecord& rec);

/// Runs repetitions x algorithms seeded runs (seed = seed_base + repetition)
/// and persists system.json, fronts/<run_id>.csv and manifest.json under
/// `out_dir`. Records come back in algorithm-major, repetition-minor order.
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, const SystemDefinition& sys,
                                      const std::filesystem::path& out_dir, std::ostream* log = nullptr);

/// A persisted experiment, read back from disk.
struct RunDirectory {
    std::filesystem::path dir;
    nlohmann::json manifest;
    SystemDefinition system;
    std::string mode;
    std::vector<RunRecord> records;

    std::vector<std::string> algorithms() const;  // manifest order
    std::vector<const RunRecord*> runs_of(const std::string& algorithm) const;
};

RunDirectory load_run_directory(const std::filesystem::path& dir);

struct MetricsRow {
    std::string system;
    std::string algorithm;
    std::uint64_t seed = 0;
    double hv = 0;
    std::optional<double> spread;
};

NormalizationBounds union_bounds(const std::vector<const RunRecord*>& records);
std::vector<MetricsRow> compute_metrics(const std::vector<const RunRecord*>& records, const std::string& system_id,
                                        const NormalizationBounds& bounds);
std::string metrics_csv(const std::vector<MetricsRow>& rows);

struct Comparison {
    std::string metric;  // hv or spread
    std::string algorithm_a;
    std::string algorithm_b;
    std::size_t pairs = 0;
    double median_a = 0;
    double median_b = 0;
    WilcoxonResult test;
};

/// Pairs rows of a and b by seed order and runs the signed-rank test on hv
/// and on spread (pairs with an undefined spread are dropped).
std::vector<Comparison> compare_metrics(const std::vector<MetricsRow>& a, const std::vector<MetricsRow>& b,
                                        double alpha);
std::string comparison_csv(const std::vector<Comparison>& rows);

/// level,cost,emission rows for each requested level.
std::string eaf_csv(const std::vector<const RunRecord*>& records, const std::vector<double>& levels);

struct ReportOptions {
    std::vector<double> eaf_levels{25, 50, 75};
    double alpha = 0.05;
    std::optional<NormalizationBounds> bounds;  // unset: union of all fronts
};

/// Writes report/{dispatch.csv, summary.csv, metrics.csv, wilcoxon.csv,
/// eaf_<ALG>.csv} under the run directory. Depends only on persisted files.
void emit_reports(const RunDirectory& rd, const ReportOptions& opts);

/// {"min": [c, e], "max": [c, e]}
NormalizationBounds bounds_from_json(const nlohmann::json& j);

}  // namespace chped
