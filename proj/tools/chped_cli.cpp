// chped: run dispatch experiments and analyse their persisted fronts.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "chped/error.hpp"
#include "chped/experiment.hpp"
#include "chped/io.hpp"

namespace fs = std::filesystem;
using namespace chped;

namespace {

std::vector<double> parse_levels(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw StructuralError("bad level '" + item + "' in --levels");
        }
    }
    if (out.empty()) throw StructuralError("--levels is empty");
    return out;
}

std::optional<NormalizationBounds> parse_bounds(const std::string& arg) {
    if (arg == "union") return std::nullopt;
    return bounds_from_json(read_json(arg));
}

std::string pick_algorithm(const RunDirectory& rd, const std::string& requested, const std::string& avoid) {
    const auto algs = rd.algorithms();
    if (!requested.empty()) {
        if (std::find(algs.begin(), algs.end(), requested) == algs.end()) {
            throw StructuralError("algorithm " + requested + " has no runs in " + rd.dir.string());
        }
        return requested;
    }
    for (const auto& a : algs) {
        if (a != avoid) return a;
    }
    return algs.front();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Combined heat and power dispatch experiments"};
    app.require_subcommand(1);

    std::string experiment_file;
    auto* run = app.add_subcommand("run", "Run an experiment file and write fronts, manifest and reports");
    run->add_option("experiment", experiment_file, "experiment JSON")->required()->check(CLI::ExistingFile);
    std::size_t jobs_override = 0;
    run->add_option("--jobs", jobs_override, "concurrent runs (overrides the file; 0 keeps it)");

    std::string run_dir, bounds_arg = "union";
    auto* metrics = app.add_subcommand("metrics", "Hypervolume and spread per run");
    metrics->add_option("run-dir", run_dir)->required()->check(CLI::ExistingDirectory);
    metrics->add_option("--bounds", bounds_arg, "union, or a JSON file with min/max per objective");

    std::string levels_text = "25,50,75";
    auto* eaf = app.add_subcommand("eaf", "Attainment surfaces per algorithm");
    eaf->add_option("run-dir", run_dir)->required()->check(CLI::ExistingDirectory);
    eaf->add_option("--levels", levels_text, "comma-separated percentages");

    std::string dir_a, dir_b, test = "wilcoxon", algo_a, algo_b;
    double alpha = 0.05;
    auto* compare = app.add_subcommand("compare", "Paired signed-rank test on hv and spread");
    compare->add_option("run-dir-a", dir_a)->required()->check(CLI::ExistingDirectory);
    compare->add_option("run-dir-b", dir_b)->required()->check(CLI::ExistingDirectory);
    compare->add_option("--test", test)->check(CLI::IsMember({"wilcoxon"}));
    compare->add_option("--alpha", alpha)->check(CLI::Range(0.0, 1.0));
    compare->add_option("--algorithm-a", algo_a, "default: first algorithm in run-dir-a");
    compare->add_option("--algorithm-b", algo_b, "default: first algorithm in run-dir-b other than algorithm-a");
    compare->add_option("--bounds", bounds_arg, "union, or a JSON file with min/max per objective");

    auto* report = app.add_subcommand("report", "Rewrite the report tables of a run directory");
    report->add_option("run-dir", run_dir)->required()->check(CLI::ExistingDirectory);
    report->add_option("--levels", levels_text, "EAF levels");
    report->add_option("--alpha", alpha)->check(CLI::Range(0.0, 1.0));
    report->add_option("--bounds", bounds_arg, "union, or a JSON file with min/max per objective");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            ExperimentConfig cfg = load_experiment(experiment_file);
            if (jobs_override) cfg.jobs = jobs_override;
            const SystemDefinition sys = load_system(cfg.system_path);
            const fs::path out = resolve_output_dir(cfg);
            run_experiment(cfg, sys, out, &std::cerr);
            emit_reports(load_run_directory(out), ReportOptions{});
            std::cout << out.string() << "\n";
        } else if (metrics->parsed()) {
            const RunDirectory rd = load_run_directory(run_dir);
            std::vector<const RunRecord*> all;
            for (const auto& r : rd.records) all.push_back(&r);
            const auto bounds = parse_bounds(bounds_arg);
            const std::string csv = metrics_csv(compute_metrics(all, rd.system.id, bounds ? *bounds : union_bounds(all)));
            write_file_atomic(fs::path(run_dir) / "metrics.csv", csv);
            std::cout << csv;
        } else if (eaf->parsed()) {
            const RunDirectory rd = load_run_directory(run_dir);
            const auto levels = parse_levels(levels_text);
            for (const std::string& alg : rd.algorithms()) {
                const fs::path file = fs::path(run_dir) / "eaf" / (alg + ".csv");
                write_file_atomic(file, eaf_csv(rd.runs_of(alg), levels));
                std::cout << file.string() << "\n";
            }
        } else if (compare->parsed()) {
            const RunDirectory a = load_run_directory(dir_a);
            const RunDirectory b = fs::equivalent(dir_a, dir_b) ? a : load_run_directory(dir_b);
            const std::string alg_a = pick_algorithm(a, algo_a, "");
            const std::string alg_b = pick_algorithm(b, algo_b, alg_a);
            const auto runs_a = a.runs_of(alg_a), runs_b = b.runs_of(alg_b);
            std::vector<const RunRecord*> both(runs_a);
            both.insert(both.end(), runs_b.begin(), runs_b.end());
            const auto parsed = parse_bounds(bounds_arg);
            const NormalizationBounds bounds = parsed ? *parsed : union_bounds(both);
            std::cout << comparison_csv(compare_metrics(compute_metrics(runs_a, a.system.id, bounds),
                                                        compute_metrics(runs_b, b.system.id, bounds), alpha));
        } else if (report->parsed()) {
            ReportOptions opts;
            opts.eaf_levels = parse_levels(levels_text);
            opts.alpha = alpha;
            opts.bounds = parse_bounds(bounds_arg);
            emit_reports(load_run_directory(run_dir), opts);
            std::cout << (fs::path(run_dir) / "report").string() << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "chped: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
