#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "chped/dispatch_problem.hpp"
#include "chped/system.hpp"

namespace chped {

/// Parses and validates a system definition. Loss coefficients are
/// multiplied by `loss.scale_b` / `loss.scale_b0` when present. Cogeneration
/// units give either `region` (one convex polygon) or `region_parts` (a list
/// of convex polygons whose union is the region).
SystemDefinition system_from_json(const nlohmann::json& j);
SystemDefinition load_system(const std::filesystem::path& path);

nlohmann::json read_json(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

/// p1..p_Np, o1.., h1.., t1..
std::vector<std::string> gene_names(const SystemDefinition& sys);

/// Header: cost,emission,violation,p1..,o1..,h1..,t1..
std::string front_csv_header(const SystemDefinition& sys);
std::string front_to_csv(const FrontArchive& front, const SystemDefinition& sys);
void write_front_csv(const std::filesystem::path& path, const FrontArchive& front, const SystemDefinition& sys);
/// Reads objectives, violation and genes back; provenance fields are left empty.
FrontArchive read_front_csv(const std::filesystem::path& path, const SystemDefinition& sys);

/// Shortest decimal form that round-trips ("%.17g").
std::string format_number(double v);

}  // namespace chped
