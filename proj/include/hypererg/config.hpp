// Experiment configuration: a small TOML-style file format (sections,
// key = value, numbers, strings, booleans, flat arrays) and its resolution
// into runtime actions, observables, families and grids.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hypererg/dynamics.hpp"
#include "hypererg/measures.hpp"

namespace hypererg {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class TomlValue {
  public:
    using Storage = std::variant<bool, std::int64_t, std::uint64_t, double, std::string,
                                 std::vector<double>, std::vector<std::string>>;

    TomlValue() = default;
    explicit TomlValue(Storage v) : v_(std::move(v)) {}

    bool as_bool() const;
    std::int64_t as_int() const;
    std::uint64_t as_u64() const;
    double as_double() const;
    const std::string& as_string() const;
    std::vector<double> as_double_list() const;
    const Storage& raw() const { return v_; }

  private:
    Storage v_;
};

using TomlSection = std::map<std::string, TomlValue>;
using TomlTable = std::map<std::string, TomlSection>;

TomlTable parse_toml(const std::string& text);

// Measure family as written in a config: angles in units of pi.
struct FamilyDescriptor {
    std::string kind = "shell";     // ball | shell | sector | horocycle | convolution
    std::string profile = "psl2";   // psl2 | h3 | su21 | sp21 | f4 | custom
    int m1 = 1;                     // custom profile only
    int m2 = 0;
    double c = 1.0;
    double epsilon = 1.0;
    double b = 0.0;                 // 0 means the profile default 1/(2c)
    std::vector<double> u_arcs;     // flattened (lo, hi) pairs, units of pi
    std::vector<double> v_arcs;
    std::vector<double> u_pieces;   // flattened (lo, hi, weight) triples
    std::vector<double> v_pieces;

    bool operator==(const FamilyDescriptor&) const = default;
};

struct ExperimentConfig {
    int schema_version = 1;

    std::string action = "modular";      // modular | torus
    double slope = 1.4142135623730951;   // torus flows

    std::string observable = "modular/cusp";
    double y0 = 2.0;                     // cusp observables
    int k1 = 1;                          // torus trig observable
    int k2 = 1;
    double const_value = 1.0;            // const observable

    FamilyDescriptor family;

    double r_min = 2.0;
    double r_max = 12.0;
    int r_count = 6;
    std::string spacing = "lin";         // lin | log

    std::uint64_t n_per_r = 100000;
    int start_count = 1;
    std::string start_mode = "basepoint";  // basepoint | haar | fixed
    std::vector<double> fixed_starts;    // modular: (x, y, theta) triples; torus: (x, y) pairs
    std::uint64_t seed = 1;
    double bias_budget = 0.01;

    double p = 2.0;                      // maximal runs
    std::uint64_t maximal_n = 1000;

    std::string out_path = "report";
    std::string format = "csv";          // csv | json | both

    static ExperimentConfig from_string(const std::string& text);
    static ExperimentConfig from_file(const std::string& path);
    std::string serialize() const;

    bool operator==(const ExperimentConfig&) const = default;
};

RankOneProfile resolve_profile(const FamilyDescriptor& desc);
MeasureFamily resolve_family(const FamilyDescriptor& desc);
std::vector<double> resolve_grid(const ExperimentConfig& cfg);
Observable<ModularPoint> resolve_modular_observable(const ExperimentConfig& cfg);
Observable<TorusPoint> resolve_torus_observable(const ExperimentConfig& cfg);
// Start points; the seed stream is independent of the sampling streams.
std::vector<ModularPoint> resolve_modular_starts(const ExperimentConfig& cfg);
std::vector<TorusPoint> resolve_torus_starts(const ExperimentConfig& cfg);

}  // namespace hypererg
