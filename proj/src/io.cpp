#include "chped/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "chped/error.hpp"

namespace chped {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw LoadError(where, "expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) throw LoadError(where + "." + key, "unknown field");
    }
}

double number(const json& obj, const std::string& where, const std::string& key, std::optional<double> fallback = {}) {
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        throw LoadError(where + "." + key, "missing");
    }
    const json& v = obj.at(key);
    if (!v.is_number()) throw LoadError(where + "." + key, "expected a number");
    return v.get<double>();
}

std::string text(const json& obj, const std::string& key, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_string()) throw LoadError(key, "expected a string");
    return obj.at(key).get<std::string>();
}

ForPolygon<double> polygon(const json& arr, const std::string& where) {
    if (!arr.is_array()) throw LoadError(where, "expected a list of [power, heat] vertices");
    std::vector<Point2<double>> pts;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& v = arr[i];
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            throw LoadError(where + "[" + std::to_string(i) + "]", "vertex must be [power, heat]");
        }
        pts.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    // Accept clockwise listings.
    double area2 = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& a = pts[i];
        const auto& b = pts[(i + 1) % pts.size()];
        area2 += a.x() * b.y() - b.x() * a.y();
    }
    if (area2 < 0) std::reverse(pts.begin(), pts.end());
    try {
        return ForPolygon<double>(std::move(pts));
    } catch (const LoadError&) {
        throw;
    } catch (const StructuralError& e) {
        throw LoadError(where, std::string(e.what()) + " (a non-convex region must be split into convex pieces under region_parts)");
    }
}

PowerOnlyUnit power_unit(const json& j, const std::string& w) {
    check_keys(j, w, {"name", "p_min", "p_max", "cost_a", "cost_b", "cost_d", "cost_c3", "valve_e", "valve_f", "em_mu",
                      "em_kappa", "em_pi", "em_sigma", "em_nu", "em_co2_theta", "notes"});
    PowerOnlyUnit u;
    u.name = text(j, "name", w);
    u.p_min = number(j, w, "p_min");
    u.p_max = number(j, w, "p_max");
    u.cost_a = number(j, w, "cost_a", 0.0);
    u.cost_b = number(j, w, "cost_b", 0.0);
    u.cost_d = number(j, w, "cost_d", 0.0);
    u.cost_c3 = number(j, w, "cost_c3", 0.0);
    u.valve_e = number(j, w, "valve_e", 0.0);
    u.valve_f = number(j, w, "valve_f", 0.0);
    u.em_mu = number(j, w, "em_mu", 0.0);
    u.em_kappa = number(j, w, "em_kappa", 0.0);
    u.em_pi = number(j, w, "em_pi", 0.0);
    u.em_sigma = number(j, w, "em_sigma", 0.0);
    u.em_nu = number(j, w, "em_nu", 0.0);
    u.em_co2_theta = number(j, w, "em_co2_theta", 0.0);
    return u;
}

CogenUnit cogen_unit(const json& j, const std::string& w) {
    check_keys(j, w, {"name", "cost_alpha", "cost_beta", "cost_gamma", "cost_delta", "cost_eps", "cost_xi", "em_tau",
                      "em_co2_psi", "region", "region_parts", "notes"});
    const bool single = j.contains("region");
    const bool parts = j.contains("region_parts");
    if (single == parts) throw LoadError(w + ".region", "give exactly one of region or region_parts");
    std::vector<ForPolygon<double>> polys;
    if (single) {
        polys.push_back(polygon(j.at("region"), w + ".region"));
    } else {
        const json& arr = j.at("region_parts");
        if (!arr.is_array() || arr.empty()) throw LoadError(w + ".region_parts", "expected a non-empty list of polygons");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            polys.push_back(polygon(arr[i], w + ".region_parts[" + std::to_string(i) + "]"));
        }
    }
    CogenUnit u{.name = text(j, "name", w),
                .cost_alpha = number(j, w, "cost_alpha", 0.0),
                .cost_beta = number(j, w, "cost_beta", 0.0),
                .cost_gamma = number(j, w, "cost_gamma", 0.0),
                .cost_delta = number(j, w, "cost_delta", 0.0),
                .cost_eps = number(j, w, "cost_eps", 0.0),
                .cost_xi = number(j, w, "cost_xi", 0.0),
                .em_tau = number(j, w, "em_tau", 0.0),
                .em_co2_psi = number(j, w, "em_co2_psi", 0.0),
                .region = FeasibleRegion(std::move(polys))};
    return u;
}

HeatOnlyUnit heat_unit(const json& j, const std::string& w) {
    check_keys(j, w, {"name", "h_min", "h_max", "cost_phi", "cost_eta", "cost_lambda", "em_rho", "em_co2_varpi", "notes"});
    HeatOnlyUnit u;
    u.name = text(j, "name", w);
    u.h_min = number(j, w, "h_min");
    u.h_max = number(j, w, "h_max");
    u.cost_phi = number(j, w, "cost_phi", 0.0);
    u.cost_eta = number(j, w, "cost_eta", 0.0);
    u.cost_lambda = number(j, w, "cost_lambda", 0.0);
    u.em_rho = number(j, w, "em_rho", 0.0);
    u.em_co2_varpi = number(j, w, "em_co2_varpi", 0.0);
    return u;
}

template <typename F>
auto unit_list(const json& j, const std::string& key, F parse) {
    std::vector<decltype(parse(json{}, std::string{}))> out;
    if (!j.contains(key)) return out;
    const json& arr = j.at(key);
    if (!arr.is_array()) throw LoadError(key, "expected a list");
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(parse(arr[i], key + "[" + std::to_string(i) + "]"));
    return out;
}

LossModel loss_model(const json& j, std::size_t n) {
    LossModel m;
    check_keys(j, "loss", {"enabled", "b", "b0", "b00", "scale_b", "scale_b0", "notes"});
    m.enabled = j.value("enabled", true);
    if (!m.enabled) return m;
    const double sb = number(j, "loss", "scale_b", 1.0);
    const double sb0 = number(j, "loss", "scale_b0", 1.0);
    const auto dim = static_cast<Eigen::Index>(n);
    if (!j.contains("b") || !j.at("b").is_array()) throw LoadError("loss.b", "missing matrix");
    const json& b = j.at("b");
    m.b.resize(static_cast<Eigen::Index>(b.size()), dim);
    for (std::size_t r = 0; r < b.size(); ++r) {
        if (!b[r].is_array() || b[r].size() != n) {
            throw LoadError("loss.b[" + std::to_string(r) + "]", "row must have " + std::to_string(n) + " entries");
        }
        for (std::size_t c = 0; c < n; ++c) {
            m.b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = b[r][c].get<double>() * sb;
        }
    }
    m.b0 = Eigen::VectorXd::Zero(dim);
    if (j.contains("b0")) {
        const json& b0 = j.at("b0");
        if (!b0.is_array()) throw LoadError("loss.b0", "expected a list");
        m.b0.resize(static_cast<Eigen::Index>(b0.size()));
        for (std::size_t i = 0; i < b0.size(); ++i) m.b0[static_cast<Eigen::Index>(i)] = b0[i].get<double>() * sb0;
    }
    m.b00 = number(j, "loss", "b00", 0.0);
    return m;
}

}  // namespace

SystemDefinition system_from_json(const json& j) {
    check_keys(j, "system", {"id", "source", "notes", "demand", "power_units", "cogen_units", "heat_units", "loss"});
    SystemDefinition sys;
    sys.id = text(j, "id", "system");
    if (!j.contains("demand")) throw LoadError("demand", "missing");
    check_keys(j.at("demand"), "demand", {"power", "heat"});
    sys.power_demand = number(j.at("demand"), "demand", "power");
    sys.heat_demand = number(j.at("demand"), "demand", "heat");
    try {
        sys.power_units = unit_list(j, "power_units", power_unit);
        sys.cogen_units = unit_list(j, "cogen_units", cogen_unit);
        sys.heat_units = unit_list(j, "heat_units", heat_unit);
        if (j.contains("loss")) sys.loss = loss_model(j.at("loss"), sys.np() + sys.nc());
    } catch (const json::exception& e) {
        throw LoadError("system", e.what());
    }
    sys.validate();
    return sys;
}

json read_json(const std::filesystem::path& path) {
    const std::string body = read_file(path);
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw LoadError(path.string(), e.what());
    }
}

SystemDefinition load_system(const std::filesystem::path& path) {
    try {
        return system_from_json(read_json(path));
    } catch (const LoadError& e) {
        throw LoadError(path.string() + ": " + e.field(), std::string(e.what()).substr(e.field().size() + 2));
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError(path.string(), "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw StructuralError("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) throw StructuralError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> gene_names(const SystemDefinition& sys) {
    std::vector<std::string> names;
    auto cols = [&](char prefix, std::size_t n) {
        for (std::size_t i = 1; i <= n; ++i) names.push_back(std::string(1, prefix) + std::to_string(i));
    };
    cols('p', sys.np());
    cols('o', sys.nc());
    cols('h', sys.nc());
    cols('t', sys.nh());
    return names;
}

std::string front_csv_header(const SystemDefinition& sys) {
    std::string h = "cost,emission,violation";
    for (const std::string& g : gene_names(sys)) h += "," + g;
    return h;
}

std::string front_to_csv(const FrontArchive& front, const SystemDefinition& sys) {
    if (front.genes.rows() > 0 && static_cast<std::size_t>(front.genes.cols()) != sys.num_genes()) {
        throw StructuralError("front genes do not match system '" + sys.id + "'");
    }
    std::string out = front_csv_header(sys) + "\n";
    for (Eigen::Index i = 0; i < front.objectives.rows(); ++i) {
        out += format_number(front.objectives(i, 0)) + "," + format_number(front.objectives(i, 1)) + "," +
               format_number(front.violation[i]);
        for (Eigen::Index g = 0; g < front.genes.cols(); ++g) out += "," + format_number(front.genes(i, g));
        out += "\n";
    }
    return out;
}

void write_front_csv(const std::filesystem::path& path, const FrontArchive& front, const SystemDefinition& sys) {
    write_file_atomic(path, front_to_csv(front, sys));
}

FrontArchive read_front_csv(const std::filesystem::path& path, const SystemDefinition& sys) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line) || line != front_csv_header(sys)) {
        throw LoadError(path.string(), "header does not match system '" + sys.id + "'");
    }
    const std::size_t cols = 3 + sys.num_genes();
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw LoadError(path.string(), "bad number '" + cell + "' on row " + std::to_string(rows.size() + 1));
            }
        }
        if (row.size() != cols) {
            throw LoadError(path.string(), "row " + std::to_string(rows.size() + 1) + " has " + std::to_string(row.size()) +
                                               " columns, expected " + std::to_string(cols));
        }
        rows.push_back(std::move(row));
    }
    FrontArchive f;
    const auto n = static_cast<Eigen::Index>(rows.size());
    f.objectives.resize(n, 2);
    f.violation.resize(n);
    f.genes.resize(n, static_cast<Eigen::Index>(sys.num_genes()));
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = rows[static_cast<std::size_t>(i)];
        f.objectives(i, 0) = r[0];
        f.objectives(i, 1) = r[1];
        f.violation[i] = r[2];
        for (std::size_t g = 0; g < sys.num_genes(); ++g) f.genes(i, static_cast<Eigen::Index>(g)) = r[3 + g];
    }
    f.system_id = sys.id;
    return f;
}

}  // namespace chped
