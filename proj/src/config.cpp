#include "hypererg/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hypererg {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Strip a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

bool looks_like_float(const std::string& tok) {
    return tok.find('.') != std::string::npos || tok.find('e') != std::string::npos ||
           tok.find('E') != std::string::npos || tok == "inf" || tok == "nan";
}

TomlValue parse_scalar(const std::string& tok, int line_no) {
    if (tok.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty value");
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"')
            throw ConfigError("line " + std::to_string(line_no) + ": unterminated string");
        return TomlValue(TomlValue::Storage(tok.substr(1, tok.size() - 2)));
    }
    if (tok == "true") return TomlValue(TomlValue::Storage(true));
    if (tok == "false") return TomlValue(TomlValue::Storage(false));
    errno = 0;
    char* end = nullptr;
    if (!looks_like_float(tok)) {
        if (tok.front() == '-') {
            const long long v = std::strtoll(tok.c_str(), &end, 10);
            if (end && *end == '\0' && errno == 0)
                return TomlValue(TomlValue::Storage(static_cast<std::int64_t>(v)));
        } else {
            const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
            if (end && *end == '\0' && errno == 0)
                return TomlValue(TomlValue::Storage(static_cast<std::uint64_t>(v)));
        }
    }
    errno = 0;
    const double d = std::strtod(tok.c_str(), &end);
    if (!end || *end != '\0' || errno != 0)
        throw ConfigError("line " + std::to_string(line_no) + ": cannot parse value '" + tok +
                          "'");
    return TomlValue(TomlValue::Storage(d));
}

TomlValue parse_value(const std::string& text, int line_no) {
    const std::string tok = trim(text);
    if (!tok.empty() && tok.front() == '[') {
        if (tok.back() != ']')
            throw ConfigError("line " + std::to_string(line_no) + ": unterminated array");
        std::vector<double> nums;
        std::vector<std::string> strs;
        bool any_string = false;
        std::string body = tok.substr(1, tok.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const std::string el = trim(item);
            if (el.empty()) continue;
            const TomlValue v = parse_scalar(el, line_no);
            if (std::holds_alternative<std::string>(v.raw())) {
                any_string = true;
                strs.push_back(std::get<std::string>(v.raw()));
            } else {
                nums.push_back(v.as_double());
            }
        }
        if (any_string) {
            if (!nums.empty())
                throw ConfigError("line " + std::to_string(line_no) + ": mixed array types");
            return TomlValue(TomlValue::Storage(strs));
        }
        return TomlValue(TomlValue::Storage(nums));
    }
    return parse_scalar(tok, line_no);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    std::string s(buf);
    // make sure a float round-trips as a float, not an integer token
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
        s += ".0";
    return s;
}

std::string format_list(const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_double(v[i]);
    }
    return out + "]";
}

const TomlValue* find(const TomlTable& table, const std::string& section,
                      const std::string& key) {
    const auto sec = table.find(section);
    if (sec == table.end()) return nullptr;
    const auto it = sec->second.find(key);
    if (it == sec->second.end()) return nullptr;
    return &it->second;
}

template <class T, class Fn>
void assign_if(const TomlTable& table, const std::string& section, const std::string& key, T& out,
               Fn&& get) {
    if (const TomlValue* v = find(table, section, key)) out = get(*v);
}

ArcSet arcs_from_pi_units(const std::vector<double>& flat, const std::string& what) {
    if (flat.size() % 2 != 0)
        throw ConfigError(what + ": arc list must hold (lo, hi) pairs in units of pi");
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i + 1 < flat.size(); i += 2)
        pairs.emplace_back(flat[i] * kPi, flat[i + 1] * kPi);
    return ArcSet::from_pairs(pairs);
}

KDensity density_from_pieces(const std::vector<double>& flat, const std::string& what) {
    if (flat.size() % 3 != 0 || flat.empty())
        throw ConfigError(what + ": pieces must hold (lo, hi, weight) triples");
    std::vector<std::pair<ArcSet, double>> pieces;
    for (std::size_t i = 0; i + 2 < flat.size(); i += 3)
        pieces.emplace_back(ArcSet::interval(flat[i] * kPi, flat[i + 1] * kPi), flat[i + 2]);
    try {
        return KDensity::from_pieces(std::move(pieces));
    } catch (const DomainError& e) {
        throw ConfigError(what + ": " + e.what());
    }
}

}  // namespace

bool TomlValue::as_bool() const {
    if (const bool* b = std::get_if<bool>(&v_)) return *b;
    throw ConfigError("expected a boolean value");
}

std::int64_t TomlValue::as_int() const {
    if (const auto* i = std::get_if<std::int64_t>(&v_)) return *i;
    if (const auto* u = std::get_if<std::uint64_t>(&v_)) return static_cast<std::int64_t>(*u);
    throw ConfigError("expected an integer value");
}

std::uint64_t TomlValue::as_u64() const {
    if (const auto* u = std::get_if<std::uint64_t>(&v_)) return *u;
    if (const auto* i = std::get_if<std::int64_t>(&v_)) {
        if (*i < 0) throw ConfigError("expected a nonnegative integer");
        return static_cast<std::uint64_t>(*i);
    }
    throw ConfigError("expected an unsigned integer value");
}

double TomlValue::as_double() const {
    if (const auto* d = std::get_if<double>(&v_)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&v_)) return static_cast<double>(*i);
    if (const auto* u = std::get_if<std::uint64_t>(&v_)) return static_cast<double>(*u);
    throw ConfigError("expected a numeric value");
}

const std::string& TomlValue::as_string() const {
    if (const auto* s = std::get_if<std::string>(&v_)) return *s;
    throw ConfigError("expected a string value");
}

std::vector<double> TomlValue::as_double_list() const {
    if (const auto* v = std::get_if<std::vector<double>>(&v_)) return *v;
    throw ConfigError("expected a numeric array");
}

TomlTable parse_toml(const std::string& text) {
    TomlTable table;
    std::string section;
    std::stringstream ss(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
            table[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        table[section][key] = parse_value(line.substr(eq + 1), line_no);
    }
    return table;
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
    const TomlTable table = parse_toml(text);
    ExperimentConfig cfg;
    assign_if(table, "", "schema_version", cfg.schema_version,
              [](const TomlValue& v) { return static_cast<int>(v.as_int()); });

    assign_if(table, "action", "name", cfg.action,
              [](const TomlValue& v) { return v.as_string(); });
    assign_if(table, "action", "slope", cfg.slope,
              [](const TomlValue& v) { return v.as_double(); });

    assign_if(table, "observable", "name", cfg.observable,
              [](const TomlValue& v) { return v.as_string(); });
    assign_if(table, "observable", "y0", cfg.y0,
              [](const TomlValue& v) { return v.as_double(); });
    assign_if(table, "observable", "k1", cfg.k1,
              [](const TomlValue& v) { return static_cast<int>(v.as_int()); });
    assign_if(table, "observable", "k2", cfg.k2,
              [](const TomlValue& v) { return static_cast<int>(v.as_int()); });
    assign_if(table, "observable", "value", cfg.const_value,
              [](const TomlValue& v) { return v.as_double(); });

    assign_if(table, "family", "kind", cfg.family.kind,
              [](const TomlValue& v) { return v.as_string(); });
    assign_if(table, "family", "profile", cfg.family.profile,
              [](const TomlValue& v) { return v.as_string(); });
    assign_if(table, "family", "m1", cfg.family.m1,
              [](const TomlValue& v) { return static_cast<int>(v.as_int()); });
    assign_if(table, "family", "m2", cfg.family.m2,
              [](const TomlValue& v) { return static_cast<int>(v.as_int()); });
    assign_if(table, "family", "c", cfg.family.c,
              [](const TomlValue& v) { return v.as_double(); });
    assign_if(table, "family", "epsilon", cfg.family.epsilon,
              [](const TomlValue& v) { return v.as_double(); });
    assign_if(table, "family", "b", cfg.family.b,
              [](const TomlValue& v) { return v.as_double(); });
    assign_if(table, "family", "u_arcs", cfg.family.u_arcs,
              [](const TomlValue& v) { return v.as_double_list(); });
    assign_if(table, "family", "v_arcs", cfg.family.v_arcs,
              [](const TomlValue& v) { return v.as_double_list(); });
    assign_if(table, "family", "u_pieces", cfg.family.u_pieces,
              [](const TomlValue& v) { return v.as_double_list(); });
    assign_if(table, "family", "v_pieces", cfg.family.v_pieces,
              [](const TomlValue& v) { return v.as_double_list(); });

    assign_if(table, "grid", "r_min", cfg.r_min,
              [](const TomlValue& v) { return v.as_double(); });
    assign_if(table, "grid", "r_max", cfg.r_max,
              [](const TomlValue& v) { return v.as_double(); });
    assign_if(table, "grid", "count", cfg.r_count,
              [](const TomlValue& v) { return static_cast<int>(v.as_int()); });
    assign_if(table, "grid", "spacing", cfg.spacing,
              [](const TomlValue& v) { return v.as_string(); });

    assign_if(table, "sampling", "n_per_r", cfg.n_per_r,
              [](const TomlValue& v) { return v.as_u64(); });
    assign_if(table, "sampling", "starts", cfg.start_count,
              [](const TomlValue& v) { return static_cast<int>(v.as_int()); });
    assign_if(table, "sampling", "start_mode", cfg.start_mode,
              [](const TomlValue& v) { return v.as_string(); });
    assign_if(table, "sampling", "fixed_starts", cfg.fixed_starts,
              [](const TomlValue& v) { return v.as_double_list(); });
    assign_if(table, "sampling", "seed", cfg.seed,
              [](const TomlValue& v) { return v.as_u64(); });
    assign_if(table, "sampling", "bias_budget", cfg.bias_budget,
              [](const TomlValue& v) { return v.as_double(); });

    assign_if(table, "maximal", "p", cfg.p, [](const TomlValue& v) { return v.as_double(); });
    assign_if(table, "maximal", "n", cfg.maximal_n,
              [](const TomlValue& v) { return v.as_u64(); });

    assign_if(table, "output", "path", cfg.out_path,
              [](const TomlValue& v) { return v.as_string(); });
    assign_if(table, "output", "format", cfg.format,
              [](const TomlValue& v) { return v.as_string(); });

    // validation beyond types
    if (cfg.action != "modular" && cfg.action != "torus")
        throw ConfigError("unknown action '" + cfg.action + "'");
    if (cfg.r_count < 1) throw ConfigError("grid count must be >= 1");
    if (cfg.spacing != "lin" && cfg.spacing != "log")
        throw ConfigError("grid spacing must be 'lin' or 'log'");
    if (cfg.start_mode != "haar" && cfg.start_mode != "basepoint" && cfg.start_mode != "fixed")
        throw ConfigError("start_mode must be 'haar', 'basepoint' or 'fixed'");
    if (cfg.format != "csv" && cfg.format != "json" && cfg.format != "both")
        throw ConfigError("format must be 'csv', 'json' or 'both'");
    if (cfg.n_per_r < 1) throw ConfigError("n_per_r must be >= 1");
    if (cfg.start_count < 1) throw ConfigError("starts must be >= 1");
    resolve_family(cfg.family);  // fail fast on bad family descriptors
    if (cfg.action == "modular")
        resolve_modular_observable(cfg);
    else
        resolve_torus_observable(cfg);
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

std::string ExperimentConfig::serialize() const {
    std::ostringstream out;
    out << "schema_version = " << schema_version << "\n\n";
    out << "[action]\n";
    out << "name = \"" << action << "\"\n";
    out << "slope = " << format_double(slope) << "\n\n";
    out << "[observable]\n";
    out << "name = \"" << observable << "\"\n";
    out << "y0 = " << format_double(y0) << "\n";
    out << "k1 = " << k1 << "\n";
    out << "k2 = " << k2 << "\n";
    out << "value = " << format_double(const_value) << "\n\n";
    out << "[family]\n";
    out << "kind = \"" << family.kind << "\"\n";
    out << "profile = \"" << family.profile << "\"\n";
    out << "m1 = " << family.m1 << "\n";
    out << "m2 = " << family.m2 << "\n";
    out << "c = " << format_double(family.c) << "\n";
    out << "epsilon = " << format_double(family.epsilon) << "\n";
    out << "b = " << format_double(family.b) << "\n";
    if (!family.u_arcs.empty()) out << "u_arcs = " << format_list(family.u_arcs) << "\n";
    if (!family.v_arcs.empty()) out << "v_arcs = " << format_list(family.v_arcs) << "\n";
    if (!family.u_pieces.empty()) out << "u_pieces = " << format_list(family.u_pieces) << "\n";
    if (!family.v_pieces.empty()) out << "v_pieces = " << format_list(family.v_pieces) << "\n";
    out << "\n[grid]\n";
    out << "r_min = " << format_double(r_min) << "\n";
    out << "r_max = " << format_double(r_max) << "\n";
    out << "count = " << r_count << "\n";
    out << "spacing = \"" << spacing << "\"\n\n";
    out << "[sampling]\n";
    out << "n_per_r = " << n_per_r << "\n";
    out << "starts = " << start_count << "\n";
    out << "start_mode = \"" << start_mode << "\"\n";
    if (!fixed_starts.empty()) out << "fixed_starts = " << format_list(fixed_starts) << "\n";
    out << "seed = " << seed << "\n";
    out << "bias_budget = " << format_double(bias_budget) << "\n\n";
    out << "[maximal]\n";
    out << "p = " << format_double(p) << "\n";
    out << "n = " << maximal_n << "\n\n";
    out << "[output]\n";
    out << "path = \"" << out_path << "\"\n";
    out << "format = \"" << format << "\"\n";
    return out.str();
}

RankOneProfile resolve_profile(const FamilyDescriptor& desc) {
    if (desc.profile == "psl2" || desc.profile == "h2") return RankOneProfile::hyperbolic_plane();
    if (desc.profile == "h3") return RankOneProfile::hyperbolic_3space();
    if (desc.profile == "su21") return RankOneProfile::su21();
    if (desc.profile == "sp21") return RankOneProfile::sp21();
    if (desc.profile == "f4") return RankOneProfile::f4();
    if (desc.profile == "custom") {
        try {
            return RankOneProfile(desc.m1, desc.m2, desc.c);
        } catch (const DomainError& e) {
            throw ConfigError(std::string("custom profile: ") + e.what());
        }
    }
    throw ConfigError("unknown profile '" + desc.profile + "'");
}

MeasureFamily resolve_family(const FamilyDescriptor& desc) {
    const RankOneProfile profile = resolve_profile(desc);
    try {
        if (desc.kind == "ball") return MeasureFamily::ball(profile);
        if (desc.kind == "shell") return MeasureFamily::shell(profile, desc.epsilon);
        if (desc.kind == "sector") {
            const ArcSet u = desc.u_arcs.empty() ? ArcSet::full()
                                                 : arcs_from_pi_units(desc.u_arcs, "u_arcs");
            const ArcSet v = desc.v_arcs.empty() ? ArcSet::full()
                                                 : arcs_from_pi_units(desc.v_arcs, "v_arcs");
            return MeasureFamily::sector(profile, desc.epsilon, u, v);
        }
        if (desc.kind == "horocycle") {
            std::optional<double> b;
            if (desc.b > 0.0) b = desc.b;
            return MeasureFamily::horocycle_window(profile, desc.epsilon, b);
        }
        if (desc.kind == "convolution") {
            const KDensity nu = desc.u_pieces.empty()
                                    ? KDensity::uniform_on(ArcSet::full())
                                    : density_from_pieces(desc.u_pieces, "u_pieces");
            const KDensity lambda = desc.v_pieces.empty()
                                        ? KDensity::uniform_on(ArcSet::full())
                                        : density_from_pieces(desc.v_pieces, "v_pieces");
            return MeasureFamily::convolution(profile, desc.epsilon, nu, lambda);
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("family: ") + e.what());
    }
    throw ConfigError("unknown family kind '" + desc.kind + "'");
}

std::vector<double> resolve_grid(const ExperimentConfig& cfg) {
    if (cfg.r_count == 1) return {cfg.r_min};
    if (!(cfg.r_max > cfg.r_min)) throw ConfigError("grid requires r_max > r_min");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(cfg.r_count));
    if (cfg.spacing == "log") {
        if (!(cfg.r_min > 0.0)) throw ConfigError("log grid requires r_min > 0");
        const double llo = std::log(cfg.r_min);
        const double lhi = std::log(cfg.r_max);
        for (int i = 0; i < cfg.r_count; ++i)
            grid.push_back(std::exp(llo + (lhi - llo) * i / (cfg.r_count - 1)));
    } else {
        for (int i = 0; i < cfg.r_count; ++i)
            grid.push_back(cfg.r_min + (cfg.r_max - cfg.r_min) * i / (cfg.r_count - 1));
    }
    return grid;
}

Observable<ModularPoint> resolve_modular_observable(const ExperimentConfig& cfg) {
    try {
        if (cfg.observable == "modular/cusp") return cusp_observable(cfg.y0);
        if (cfg.observable == "modular/ramp") return cusp_ramp_observable(cfg.y0);
        if (cfg.observable == "const") return constant_observable_modular(cfg.const_value);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("observable: ") + e.what());
    }
    throw ConfigError("unknown modular observable '" + cfg.observable + "'");
}

Observable<TorusPoint> resolve_torus_observable(const ExperimentConfig& cfg) {
    if (cfg.observable == "torus/trig") return torus_trig_observable(cfg.k1, cfg.k2);
    if (cfg.observable == "const") return constant_observable_torus(cfg.const_value);
    throw ConfigError("unknown torus observable '" + cfg.observable + "'");
}

std::vector<ModularPoint> resolve_modular_starts(const ExperimentConfig& cfg) {
    std::vector<ModularPoint> starts;
    if (cfg.start_mode == "basepoint") {
        starts.assign(static_cast<std::size_t>(cfg.start_count), modular_basepoint());
        return starts;
    }
    if (cfg.start_mode == "fixed") {
        if (cfg.fixed_starts.size() % 3 != 0 || cfg.fixed_starts.empty())
            throw ConfigError("modular fixed starts need (x, y, theta) triples");
        for (std::size_t i = 0; i + 2 < cfg.fixed_starts.size(); i += 3) {
            const double x = cfg.fixed_starts[i];
            const double y = cfg.fixed_starts[i + 1];
            const double theta = cfg.fixed_starts[i + 2];
            if (!(y > 0.0)) throw ConfigError("fixed start needs y > 0");
            starts.emplace_back(GroupElement::translation(x) *
                                GroupElement::boost(std::log(y)) *
                                GroupElement::rotation(theta));
        }
        return starts;
    }
    // haar: a dedicated stream far from the per-worker sampling streams
    Rng rng(cfg.seed, 0xead5u);
    for (int i = 0; i < cfg.start_count; ++i) starts.push_back(haar_sample_modular(rng));
    return starts;
}

std::vector<TorusPoint> resolve_torus_starts(const ExperimentConfig& cfg) {
    std::vector<TorusPoint> starts;
    if (cfg.start_mode == "fixed") {
        if (cfg.fixed_starts.size() % 2 != 0 || cfg.fixed_starts.empty())
            throw ConfigError("torus fixed starts need (x, y) pairs");
        for (std::size_t i = 0; i + 1 < cfg.fixed_starts.size(); i += 2)
            starts.emplace_back(cfg.fixed_starts[i], cfg.fixed_starts[i + 1]);
        return starts;
    }
    if (cfg.start_mode == "basepoint") {
        starts.assign(static_cast<std::size_t>(cfg.start_count), TorusPoint(0.0, 0.0));
        return starts;
    }
    Rng rng(cfg.seed, 0xead5u);
    for (int i = 0; i < cfg.start_count; ++i)
        starts.emplace_back(rng.uniform(), rng.uniform());
    return starts;
}

}  // namespace hypererg
