#include "chped/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <thread>

#include "chped/dispatch_model.hpp"
#include "chped/error.hpp"
#include "chped/io.hpp"

namespace chped {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw LoadError(where, "expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) throw LoadError(where + "." + key, "unknown field");
    }
}

template <typename T>
T field(const json& obj, const std::string& where, const std::string& key, T fallback) {
    if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw LoadError(where + "." + key, "wrong type");
    }
}

double median(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string join(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
    return out + "\n";
}

}  // namespace

ConstraintConfig constraints_from_json(const json& j) {
    ConstraintConfig c;
    if (j.is_null()) return c;
    const std::string w = "constraints";
    check_keys(j, w, {"mode", "power_slack_index", "heat_slack_index", "loss_fixed_point_tol",
                      "loss_fixed_point_max_iters", "penalty_weight", "feasibility_tol"});
    const std::string mode = field<std::string>(j, w, "mode", "repair_then_penalty");
    if (mode == "repair_then_penalty") {
        c.mode = ConstraintMode::RepairThenPenalty;
    } else if (mode == "penalty_only") {
        c.mode = ConstraintMode::PenaltyOnly;
    } else {
        throw LoadError(w + ".mode", "expected repair_then_penalty or penalty_only, got '" + mode + "'");
    }
    if (j.contains("power_slack_index") && !j.at("power_slack_index").is_null()) {
        c.power_slack_index = field<std::size_t>(j, w, "power_slack_index", 0);
    }
    if (j.contains("heat_slack_index") && !j.at("heat_slack_index").is_null()) {
        c.heat_slack_index = field<std::size_t>(j, w, "heat_slack_index", 0);
    }
    c.loss_fixed_point_tol = field(j, w, "loss_fixed_point_tol", c.loss_fixed_point_tol);
    c.loss_fixed_point_max_iters = field(j, w, "loss_fixed_point_max_iters", c.loss_fixed_point_max_iters);
    c.penalty_weight = field(j, w, "penalty_weight", c.penalty_weight);
    c.feasibility_tol = field(j, w, "feasibility_tol", c.feasibility_tol);
    return c;
}

json constraints_to_json(const ConstraintConfig& c) {
    json j{{"mode", c.mode == ConstraintMode::RepairThenPenalty ? "repair_then_penalty" : "penalty_only"},
           {"loss_fixed_point_tol", c.loss_fixed_point_tol},
           {"loss_fixed_point_max_iters", c.loss_fixed_point_max_iters},
           {"penalty_weight", c.penalty_weight},
           {"feasibility_tol", c.feasibility_tol}};
    j["power_slack_index"] = c.power_slack_index ? json(*c.power_slack_index) : json(nullptr);
    j["heat_slack_index"] = c.heat_slack_index ? json(*c.heat_slack_index) : json(nullptr);
    return j;
}

moea::EngineConfig engine_from_json(const json& j) {
    const std::string w = "algorithms[]";
    check_keys(j, w, {"name", "population_size", "max_evaluations", "crossover_prob", "mutation_prob", "sbx_eta",
                      "pm_eta", "kappa", "indicator_reference", "archive_keep_fraction"});
    moea::EngineConfig c;
    if (!j.contains("name")) throw LoadError(w + ".name", "missing");
    c.algorithm = moea::algorithm_from_string(field<std::string>(j, w, "name", ""));
    c.population_size = field(j, w, "population_size", c.population_size);
    c.max_evaluations = field(j, w, "max_evaluations", c.max_evaluations);
    c.crossover_prob = field(j, w, "crossover_prob", c.crossover_prob);
    if (j.contains("mutation_prob") && !j.at("mutation_prob").is_null()) {
        c.mutation_prob = field(j, w, "mutation_prob", 0.0);
    }
    c.sbx_eta = field(j, w, "sbx_eta", c.sbx_eta);
    c.pm_eta = field(j, w, "pm_eta", c.pm_eta);
    c.kappa = field(j, w, "kappa", c.kappa);
    c.indicator_reference = field(j, w, "indicator_reference", c.indicator_reference);
    c.archive_keep_fraction = field(j, w, "archive_keep_fraction", c.archive_keep_fraction);
    return c;
}

json engine_to_json(const moea::EngineConfig& c) {
    json j{{"name", moea::to_string(c.algorithm)},
           {"population_size", c.population_size},
           {"max_evaluations", c.max_evaluations},
           {"crossover_prob", c.crossover_prob},
           {"sbx_eta", c.sbx_eta},
           {"pm_eta", c.pm_eta},
           {"kappa", c.kappa},
           {"indicator_reference", c.indicator_reference},
           {"archive_keep_fraction", c.archive_keep_fraction}};
    j["mutation_prob"] = c.mutation_prob ? json(*c.mutation_prob) : json(nullptr);
    return j;
}

void ExperimentConfig::validate() const {
    if (id.empty()) throw LoadError("id", "must be non-empty");
    if (repetitions < 1) throw LoadError("repetitions", "must be >= 1");
    if (algorithms.empty()) throw LoadError("algorithms", "at least one algorithm is required");
    std::set<std::string> names;
    for (const auto& a : algorithms) {
        a.validate();
        if (!names.insert(moea::to_string(a.algorithm)).second) {
            throw LoadError("algorithms", "algorithm " + moea::to_string(a.algorithm) + " listed twice");
        }
    }
}

ExperimentConfig experiment_from_json(const json& j, const std::filesystem::path& base_dir) {
    check_keys(j, "experiment", {"id", "notes", "system", "mode", "repetitions", "seed_base", "output_dir",
                                 "constraints", "engine", "algorithms", "jobs"});
    ExperimentConfig cfg;
    cfg.source = j;
    cfg.id = field<std::string>(j, "experiment", "id", "");
    if (!j.contains("system")) throw LoadError("system", "missing");
    cfg.system_path = field<std::string>(j, "experiment", "system", "");
    if (cfg.system_path.is_relative()) cfg.system_path = base_dir / cfg.system_path;
    cfg.mode = dispatch_mode_from_string(field<std::string>(j, "experiment", "mode", "chpeed"));
    cfg.repetitions = field<std::size_t>(j, "experiment", "repetitions", 1);
    cfg.seed_base = field<std::uint64_t>(j, "experiment", "seed_base", 1);
    cfg.output_dir = field<std::string>(j, "experiment", "output_dir", "runs/" + cfg.id);
    cfg.jobs = field<std::size_t>(j, "experiment", "jobs", 1);
    cfg.constraints = constraints_from_json(j.value("constraints", json(nullptr)));

    // Shared engine settings, overridden per algorithm.
    const json defaults = j.value("engine", json::object());
    if (!defaults.is_object()) throw LoadError("engine", "expected an object");
    if (!j.contains("algorithms") || !j.at("algorithms").is_array()) throw LoadError("algorithms", "expected a list");
    for (const json& a : j.at("algorithms")) {
        json merged = defaults;
        if (a.is_string()) {
            merged["name"] = a;
        } else if (a.is_object()) {
            merged.update(a);
        } else {
            throw LoadError("algorithms[]", "expected a name or an object");
        }
        cfg.algorithms.push_back(engine_from_json(merged));
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
    return experiment_from_json(read_json(path), path.parent_path());
}

std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg) {
    const char* root = std::getenv(kOutputRootEnv);
    if (root && *root && cfg.output_dir.is_relative()) return std::filesystem::path(root) / cfg.output_dir;
    return cfg.output_dir;
}

Eigen::Index select_compromise(const Eigen::MatrixXd& objectives) {
    if (objectives.rows() == 0) throw StructuralError("compromise of an empty front");
    const Eigen::RowVectorXd lo = objectives.colwise().minCoeff();
    const Eigen::RowVectorXd span = objectives.colwise().maxCoeff() - lo;
    Eigen::Index best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < objectives.rows(); ++i) {
        double score = 0;
        for (Eigen::Index k = 0; k < objectives.cols(); ++k) {
            const double v = span[k] > 0 ? (objectives(i, k) - lo[k]) / span[k] : 0.0;
            score = std::max(score, v);
        }
        if (score < best_score || (score == best_score && objectives(i, 0) < objectives(best, 0))) {
            best = i;
            best_score = score;
        }
    }
    return best;
}

void annotate(RunRecord& rec) {
    const Eigen::MatrixXd& obj = rec.front.objectives;
    if (obj.rows() == 0) throw StructuralError("run " + rec.front.run_id + " has an empty front");
    auto argmin = [&](Eigen::Index k) {
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < obj.rows(); ++i) {
            const Eigen::Index o = 1 - k;
            if (obj(i, k) < obj(best, k) || (obj(i, k) == obj(best, k) && obj(i, o) < obj(best, o))) best = i;
        }
        return best;
    };
    rec.best_cost = argmin(0);
    rec.best_emission = argmin(1);
    rec.compromise = select_compromise(obj);
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, const SystemDefinition& sys,
                                      const std::filesystem::path& out_dir, std::ostream* log) {
    cfg.validate();
    namespace fs = std::filesystem;
    fs::create_directories(out_dir / "fronts");
    write_file_atomic(out_dir / "system.json", read_file(cfg.system_path));

    struct Task {
        moea::EngineConfig engine;
    };
    std::vector<Task> tasks;
    for (const auto& a : cfg.algorithms) {
        for (std::size_t r = 0; r < cfg.repetitions; ++r) {
            Task t{a};
            t.engine.rng_seed = cfg.seed_base + r;
            tasks.push_back(t);
        }
    }

    std::vector<RunRecord> records(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;

    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const moea::EngineConfig& ecfg = tasks[i].engine;
            try {
                const auto start = std::chrono::steady_clock::now();
                RunRecord rec;
                rec.front = solve(sys, ecfg, cfg.constraints, cfg.mode);
                rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                rec.experiment_id = cfg.id;
                rec.algorithm = moea::to_string(ecfg.algorithm);
                rec.seed = ecfg.rng_seed;
                rec.evaluations = ecfg.max_evaluations;
                annotate(rec);
                write_front_csv(out_dir / "fronts" / (rec.front.run_id + ".csv"), rec.front, sys);
                if (log) {
                    std::lock_guard lock(log_mutex);
                    *log << rec.front.run_id << ": " << rec.front.size() << " points, min cost "
                         << rec.front.objectives(rec.best_cost, 0) << ", min emission "
                         << rec.front.objectives(rec.best_emission, 1) << ", " << rec.wall_time_s << " s\n";
                }
                records[i] = std::move(rec);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    std::size_t jobs = cfg.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.jobs;
    jobs = std::min(jobs, tasks.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < jobs; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (!errors[i]) continue;
        const std::string ctx = moea::to_string(tasks[i].engine.algorithm) + " seed " +
                                std::to_string(tasks[i].engine.rng_seed);
        try {
            std::rethrow_exception(errors[i]);
        } catch (const std::exception& e) {
            throw StructuralError("run " + ctx + " failed: " + e.what());
        }
    }

    json runs = json::array();
    for (const RunRecord& r : records) {
        runs.push_back({{"run_id", r.front.run_id},
                        {"algorithm", r.algorithm},
                        {"seed", r.seed},
                        {"wall_time_s", r.wall_time_s},
                        {"evaluations", r.evaluations},
                        {"points", r.front.size()},
                        {"front_file", "fronts/" + r.front.run_id + ".csv"}});
    }
    json algos = json::array();
    for (const auto& a : cfg.algorithms) algos.push_back(engine_to_json(a));
    const json manifest{{"experiment", cfg.id},
                        {"system_id", sys.id},
                        {"system_file", "system.json"},
                        {"mode", to_string(cfg.mode)},
                        {"repetitions", cfg.repetitions},
                        {"seed_base", cfg.seed_base},
                        {"seeds", [&] {
                             json s = json::array();
                             for (std::size_t r = 0; r < cfg.repetitions; ++r) s.push_back(cfg.seed_base + r);
                             return s;
                         }()},
                        {"constraints", constraints_to_json(cfg.constraints)},
                        {"algorithms", algos},
                        {"config", cfg.source},
                        {"runs", runs}};
    write_file_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
    return records;
}

std::vector<std::string> RunDirectory::algorithms() const {
    std::vector<std::string> out;
    for (const auto& r : records) {
        if (std::find(out.begin(), out.end(), r.algorithm) == out.end()) out.push_back(r.algorithm);
    }
    return out;
}

std::vector<const RunRecord*> RunDirectory::runs_of(const std::string& algorithm) const {
    std::vector<const RunRecord*> out;
    for (const auto& r : records) {
        if (r.algorithm == algorithm) out.push_back(&r);
    }
    return out;
}

RunDirectory load_run_directory(const std::filesystem::path& dir) {
    RunDirectory rd{dir, read_json(dir / "manifest.json"), load_system(dir / "system.json"), "", {}};
    const json& m = rd.manifest;
    try {
        rd.mode = m.at("mode").get<std::string>();
        for (const json& r : m.at("runs")) {
            RunRecord rec;
            rec.experiment_id = m.at("experiment").get<std::string>();
            rec.algorithm = r.at("algorithm").get<std::string>();
            rec.seed = r.at("seed").get<std::uint64_t>();
            rec.wall_time_s = r.at("wall_time_s").get<double>();
            rec.evaluations = r.value("evaluations", std::size_t{0});
            rec.front = read_front_csv(dir / r.at("front_file").get<std::string>(), rd.system);
            rec.front.run_id = r.at("run_id").get<std::string>();
            rec.front.seed = rec.seed;
            rec.front.algorithm = rec.algorithm;
            annotate(rec);
            rd.records.push_back(std::move(rec));
        }
    } catch (const json::exception& e) {
        throw LoadError((dir / "manifest.json").string(), e.what());
    }
    return rd;
}

NormalizationBounds union_bounds(const std::vector<const RunRecord*>& records) {
    std::vector<Eigen::MatrixXd> fronts;
    for (const RunRecord* r : records) fronts.push_back(r->front.objectives);
    NormalizationBounds b = NormalizationBounds::union_of(fronts);
    // Degenerate axes (e.g. a single shared point) get a unit span.
    for (Eigen::Index k = 0; k < 2; ++k) {
        if (!(b.max[k] > b.min[k])) b.max[k] = b.min[k] + 1;
    }
    return b;
}

std::vector<MetricsRow> compute_metrics(const std::vector<const RunRecord*>& records, const std::string& system_id,
                                        const NormalizationBounds& bounds) {
    std::vector<MetricsRow> rows;
    for (const RunRecord* r : records) {
        rows.push_back({system_id, r->algorithm, r->seed, hv_metric(r->front.objectives, bounds),
                        spread_delta(r->front.objectives, bounds)});
    }
    return rows;
}

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
    std::string out = "system,algorithm,seed,hv,spread\n";
    for (const auto& r : rows) {
        out += join({r.system, r.algorithm, std::to_string(r.seed), format_number(r.hv),
                     r.spread ? format_number(*r.spread) : ""});
    }
    return out;
}

std::vector<Comparison> compare_metrics(const std::vector<MetricsRow>& a, const std::vector<MetricsRow>& b,
                                        double alpha) {
    if (a.empty() || b.empty()) throw StructuralError("comparison needs runs on both sides");
    auto by_seed = [](std::vector<MetricsRow> v) {
        std::stable_sort(v.begin(), v.end(), [](const MetricsRow& x, const MetricsRow& y) { return x.seed < y.seed; });
        return v;
    };
    const auto sa = by_seed(a), sb = by_seed(b);
    const std::size_t n = std::min(sa.size(), sb.size());

    std::vector<Comparison> out;
    for (const std::string metric : {"hv", "spread"}) {
        std::vector<std::pair<double, double>> pairs;
        std::vector<double> va, vb;
        for (std::size_t i = 0; i < n; ++i) {
            double x = 0, y = 0;
            if (metric == "hv") {
                x = sa[i].hv;
                y = sb[i].hv;
            } else {
                if (!sa[i].spread || !sb[i].spread) continue;
                x = *sa[i].spread;
                y = *sb[i].spread;
            }
            pairs.emplace_back(x, y);
            va.push_back(x);
            vb.push_back(y);
        }
        Comparison c{metric, sa.front().algorithm, sb.front().algorithm, pairs.size(), median(va), median(vb),
                     wilcoxon_signed_rank(pairs, alpha)};
        out.push_back(c);
    }
    return out;
}

std::string comparison_csv(const std::vector<Comparison>& rows) {
    std::string out = "metric,algorithm_a,algorithm_b,pairs,median_a,median_b,w_plus,p_value,reject\n";
    for (const auto& c : rows) {
        out += join({c.metric, c.algorithm_a, c.algorithm_b, std::to_string(c.pairs), format_number(c.median_a),
                     format_number(c.median_b), format_number(c.test.w_plus), format_number(c.test.p_value),
                     c.test.reject ? "1" : "0"});
    }
    return out;
}

std::string eaf_csv(const std::vector<const RunRecord*>& records, const std::vector<double>& levels) {
    std::vector<Eigen::MatrixXd> runs;
    for (const RunRecord* r : records) runs.push_back(r->front.objectives);
    std::string out = "level,cost,emission\n";
    for (const AttainmentSurface& s : eaf_surfaces(runs, levels)) {
        for (Eigen::Index i = 0; i < s.points.rows(); ++i) {
            out += join({format_number(s.level), format_number(s.points(i, 0)), format_number(s.points(i, 1))});
        }
    }
    return out;
}

namespace {

std::string dispatch_table(const RunDirectory& rd) {
    const SystemDefinition& sys = rd.system;
    std::vector<std::string> head{"algorithm", "seed", "point"};
    for (const std::string& g : gene_names(sys)) head.push_back(g);
    for (const char* c : {"cost", "emission", "ploss", "power_residual", "heat_residual", "violation", "time_s"}) {
        head.push_back(c);
    }
    std::string out = join(head);

    const bool single = rd.mode == "chped";
    for (const RunRecord& r : rd.records) {
        std::vector<std::pair<std::string, Eigen::Index>> points{{"best_cost", r.best_cost}};
        if (!single) {
            points.emplace_back("best_emission", r.best_emission);
            points.emplace_back("compromise", r.compromise);
        }
        for (const auto& [label, row] : points) {
            const DispatchVector x = DispatchVector::from_genes(r.front.genes.row(row).transpose(), sys);
            const Evaluation ev = evaluate(x, sys);
            std::vector<std::string> cells{r.algorithm, std::to_string(r.seed), label};
            for (Eigen::Index g = 0; g < r.front.genes.cols(); ++g) cells.push_back(format_number(r.front.genes(row, g)));
            for (double v : {ev.cost, ev.emission, ev.loss, ev.power_residual, ev.heat_residual,
                             total_violation(ev), r.wall_time_s}) {
                cells.push_back(format_number(v));
            }
            out += join(cells);
        }
    }
    return out;
}

struct Stats {
    double best, worst, mean, stddev;
};

Stats stats(const std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    return {*std::min_element(v.begin(), v.end()), *std::max_element(v.begin(), v.end()), mean, sd};
}

std::string summary_table(const RunDirectory& rd) {
    std::string out =
        "algorithm,runs,cost_best,cost_worst,cost_mean,cost_std,emission_best,emission_worst,emission_mean,"
        "emission_std,time_mean_s\n";
    for (const std::string& alg : rd.algorithms()) {
        std::vector<double> cost, em, time;
        for (const RunRecord* r : rd.runs_of(alg)) {
            cost.push_back(r->front.objectives(r->best_cost, 0));
            em.push_back(r->front.objectives(r->best_emission, 1));
            time.push_back(r->wall_time_s);
        }
        const Stats c = stats(cost), e = stats(em), t = stats(time);
        out += join({alg, std::to_string(cost.size()), format_number(c.best), format_number(c.worst),
                     format_number(c.mean), format_number(c.stddev), format_number(e.best), format_number(e.worst),
                     format_number(e.mean), format_number(e.stddev), format_number(t.mean)});
    }
    return out;
}

}  // namespace

void emit_reports(const RunDirectory& rd, const ReportOptions& opts) {
    if (rd.records.empty()) throw StructuralError("no runs recorded in " + rd.dir.string());
    const auto out = rd.dir / "report";
    std::vector<const RunRecord*> all;
    for (const auto& r : rd.records) all.push_back(&r);
    const NormalizationBounds bounds = opts.bounds ? *opts.bounds : union_bounds(all);

    write_file_atomic(out / "dispatch.csv", dispatch_table(rd));
    write_file_atomic(out / "summary.csv", summary_table(rd));
    const std::vector<MetricsRow> rows = compute_metrics(all, rd.system.id, bounds);
    write_file_atomic(out / "metrics.csv", metrics_csv(rows));

    const std::vector<std::string> algs = rd.algorithms();
    std::vector<Comparison> comps;
    auto rows_of = [&](const std::string& alg) {
        std::vector<MetricsRow> v;
        for (const auto& r : rows) {
            if (r.algorithm == alg) v.push_back(r);
        }
        return v;
    };
    for (std::size_t i = 1; i < algs.size(); ++i) {
        const auto c = compare_metrics(rows_of(algs[0]), rows_of(algs[i]), opts.alpha);
        comps.insert(comps.end(), c.begin(), c.end());
    }
    write_file_atomic(out / "wilcoxon.csv", comparison_csv(comps));

    for (const std::string& alg : algs) {
        const auto runs = rd.runs_of(alg);
        if (runs.size() < 2) continue;
        write_file_atomic(out / ("eaf_" + alg + ".csv"), eaf_csv(runs, opts.eaf_levels));
    }
}

NormalizationBounds bounds_from_json(const json& j) {
    try {
        const auto lo = j.at("min").get<std::vector<double>>();
        const auto hi = j.at("max").get<std::vector<double>>();
        if (lo.size() != 2 || hi.size() != 2) throw LoadError("bounds", "min and max need two entries");
        NormalizationBounds b{Eigen::Vector2d(lo[0], lo[1]), Eigen::Vector2d(hi[0], hi[1])};
        b.validate();
        return b;
    } catch (const json::exception& e) {
        throw LoadError("bounds", e.what());
    }
}

}  // namespace chped
