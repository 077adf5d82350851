// CSV and JSON serialization of experiment results.
#pragma once

#include <iosfwd>
#include <string>

#include "hypererg/config.hpp"
#include "hypererg/estimators.hpp"

namespace hypererg {

inline constexpr int kSchemaVersion = 1;

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report);
std::string convergence_json(const ExperimentConfig& cfg, const ConvergenceReport& report);

void write_maximal_csv(std::ostream& out, const MaximalEstimate& estimate);
std::string maximal_json(const ExperimentConfig& cfg, const MaximalEstimate& estimate);

void write_density_csv(std::ostream& out, const std::string& which,
                       const std::vector<double>& t_grid, const std::vector<double>& values);

// Writes report files next to `base` with .csv / .json suffixes according
// to format ("csv", "json" or "both").
void emit_convergence(const std::string& base, const std::string& format,
                      const ExperimentConfig& cfg, const ConvergenceReport& report);
void emit_maximal(const std::string& base, const std::string& format,
                  const ExperimentConfig& cfg, const MaximalEstimate& estimate);

}  // namespace hypererg
