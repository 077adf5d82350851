#include "hypererg/report.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace hypererg {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json config_echo(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["schema_version"] = cfg.schema_version;
    j["action"] = {{"name", cfg.action}, {"slope", cfg.slope}};
    j["observable"] = {{"name", cfg.observable}, {"y0", cfg.y0},  {"k1", cfg.k1},
                       {"k2", cfg.k2},           {"value", cfg.const_value}};
    j["family"] = {{"kind", cfg.family.kind},   {"profile", cfg.family.profile},
                   {"m1", cfg.family.m1},       {"m2", cfg.family.m2},
                   {"c", cfg.family.c},         {"epsilon", cfg.family.epsilon},
                   {"b", cfg.family.b},         {"u_arcs", cfg.family.u_arcs},
                   {"v_arcs", cfg.family.v_arcs}, {"u_pieces", cfg.family.u_pieces},
                   {"v_pieces", cfg.family.v_pieces}};
    j["grid"] = {{"r_min", cfg.r_min},
                 {"r_max", cfg.r_max},
                 {"count", cfg.r_count},
                 {"spacing", cfg.spacing}};
    j["sampling"] = {{"n_per_r", cfg.n_per_r},     {"starts", cfg.start_count},
                     {"start_mode", cfg.start_mode}, {"seed", cfg.seed},
                     {"bias_budget", cfg.bias_budget}};
    j["output"] = {{"path", cfg.out_path}, {"format", cfg.format}};
    return j;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    out << body;
}

}  // namespace

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report) {
    out << "r,mean,std_error,target,deviation,flag\n";
    for (const ConvergenceRow& row : report.rows) {
        out << fmt(row.r) << ',' << fmt(row.estimate.mean) << ',' << fmt(row.estimate.std_error)
            << ',' << fmt(row.target) << ',' << fmt(row.deviation) << ','
            << (row.flagged ? 1 : 0) << '\n';
    }
}

std::string convergence_json(const ExperimentConfig& cfg, const ConvergenceReport& report) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["config"] = config_echo(cfg);
    j["target"] = report.target;
    j["bias_budget"] = report.bias_budget;
    j["pass"] = report.all_pass;
    nlohmann::json rows = nlohmann::json::array();
    for (const ConvergenceRow& row : report.rows) {
        rows.push_back({{"r", row.r},
                        {"mean", row.estimate.mean},
                        {"std_error", row.estimate.std_error},
                        {"n_samples", row.estimate.n_samples},
                        {"target", row.target},
                        {"deviation", row.deviation},
                        {"flag", row.flagged}});
    }
    j["records"] = rows;
    return j.dump(2) + "\n";
}

void write_maximal_csv(std::ostream& out, const MaximalEstimate& estimate) {
    out << "start_index,max_abs_mean\n";
    for (std::size_t i = 0; i < estimate.per_start_max.size(); ++i)
        out << i << ',' << fmt(estimate.per_start_max[i]) << '\n';
}

std::string maximal_json(const ExperimentConfig& cfg, const MaximalEstimate& estimate) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["config"] = config_echo(cfg);
    j["p"] = estimate.p;
    j["f_norm"] = estimate.f_norm;
    j["ratio"] = estimate.ratio;
    j["starts"] = estimate.per_start_max.size();
    return j.dump(2) + "\n";
}

void write_density_csv(std::ostream& out, const std::string& which,
                       const std::vector<double>& t_grid, const std::vector<double>& values) {
    out << "t," << which << "\n";
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        out << fmt(t_grid[i]) << ',' << fmt(values[i]) << '\n';
}

void emit_convergence(const std::string& base, const std::string& format,
                      const ExperimentConfig& cfg, const ConvergenceReport& report) {
    if (format == "csv" || format == "both") {
        std::ostringstream ss;
        write_convergence_csv(ss, report);
        write_file(base + ".csv", ss.str());
    }
    if (format == "json" || format == "both") {
        write_file(base + ".json", convergence_json(cfg, report));
    }
}

void emit_maximal(const std::string& base, const std::string& format,
                  const ExperimentConfig& cfg, const MaximalEstimate& estimate) {
    if (format == "csv" || format == "both") {
        std::ostringstream ss;
        write_maximal_csv(ss, estimate);
        write_file(base + ".csv", ss.str());
    }
    if (format == "json" || format == "both") {
        write_file(base + ".json", maximal_json(cfg, estimate));
    }
}

}  // namespace hypererg
