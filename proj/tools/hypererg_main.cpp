// hypererg: numerical laboratory for averaging families on PSL(2,R) and
// their ergodic behavior on the modular surface and torus flows.
//
// Subcommands: decompose, density, sample, converge, maximal, check.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hypererg/config.hpp"
#include "hypererg/estimators.hpp"
#include "hypererg/group.hpp"
#include "hypererg/measures.hpp"
#include "hypererg/report.hpp"

namespace {

using namespace hypererg;

constexpr int kExitFlagged = 1;
constexpr int kExitUsage = 2;

int resolve_workers(int cli_workers) {
    if (cli_workers > 0) return cli_workers;
    if (const char* env = std::getenv("HYPERERG_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    return 1;
}

std::ostream& open_sink(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw ConfigError("cannot open output file '" + path + "'");
    return file;
}

int cmd_decompose(const std::vector<double>& entries) {
    if (entries.size() != 4) {
        std::cerr << "decompose expects four matrix entries a b c d\n";
        return kExitUsage;
    }
    GroupElement g;
    try {
        g = GroupElement(entries[0], entries[1], entries[2], entries[3]);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const CartanCoords cc = cartan_decompose(g);
    const IwasawaCoords ic = iwasawa_decompose(g);
    std::printf("cartan: theta1=%.12g r=%.12g theta2=%.12g residual=%.3g\n", cc.theta1, cc.r,
                cc.theta2, class_distance(reconstruct(cc), g));
    std::printf("iwasawa: theta=%.12g s=%.12g u=%.12g residual=%.3g\n", ic.theta, ic.s, ic.u,
                class_distance(reconstruct(ic), g));
    return 0;
}

int cmd_density(const std::string& profile_name, const std::string& which, double t_min,
                double t_max, int count, const std::string& out_path) {
    FamilyDescriptor desc;
    desc.profile = profile_name;
    RankOneProfile profile = RankOneProfile::hyperbolic_plane();
    try {
        profile = resolve_profile(desc);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    if (count < 1 || t_min < 0.0 || t_max < t_min) {
        std::cerr << "error: invalid t grid\n";
        return kExitUsage;
    }
    std::vector<double> grid;
    std::vector<double> values;
    for (int i = 0; i < count; ++i) {
        const double t =
            count == 1 ? t_min : t_min + (t_max - t_min) * static_cast<double>(i) / (count - 1);
        grid.push_back(t);
        values.push_back(which == "kak" ? kak_density(profile, t) : psi_density(profile, t));
    }
    std::ofstream file;
    std::ostream& out = open_sink(file, out_path);
    write_density_csv(out, which, grid, values);
    return 0;
}

int cmd_sample(const std::string& config_path, double r, std::uint64_t n,
               std::uint64_t seed_override, bool has_seed, const std::string& out_path) {
    ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
    if (has_seed) cfg.seed = seed_override;
    const MeasureFamily family = resolve_family(cfg.family);
    const PreparedFamily prepared(family, r);
    Rng rng(cfg.seed);
    std::ofstream file;
    std::ostream& out = open_sink(file, out_path);
    out << "a,b,c,d,theta1,t,theta2\n";
    char buf[256];
    for (std::uint64_t i = 0; i < n; ++i) {
        const GroupElement g = prepared.sample(rng);
        const CartanCoords cc = cartan_decompose(g);
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", g.a(),
                      g.b(), g.c(), g.d(), cc.theta1, cc.r, cc.theta2);
        out << buf;
    }
    return 0;
}

int cmd_converge(const std::string& config_path, int workers, std::uint64_t seed_override,
                 bool has_seed, const std::string& out_override,
                 const std::string& format_override) {
    ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
    if (has_seed) cfg.seed = seed_override;
    if (!out_override.empty()) cfg.out_path = out_override;
    if (!format_override.empty()) cfg.format = format_override;
    const MeasureFamily family = resolve_family(cfg.family);
    const std::vector<double> grid = resolve_grid(cfg);
    ConvergenceReport report;
    if (cfg.action == "modular") {
        const auto obs = resolve_modular_observable(cfg);
        const auto starts = resolve_modular_starts(cfg);
        report = convergence_sweep(family, ModularAction{}, obs, starts, grid, cfg.n_per_r,
                                   cfg.seed, workers, cfg.bias_budget);
    } else {
        throw ConfigError("converge supports the modular action; use the birkhoff paths for "
                          "torus flows");
    }
    emit_convergence(cfg.out_path, cfg.format, cfg, report);
    for (const ConvergenceRow& row : report.rows) {
        std::printf("r=%-8.4g mean=%.6f stderr=%.2e deviation=%.2e %s\n", row.r,
                    row.estimate.mean, row.estimate.std_error, row.deviation,
                    row.flagged ? "FLAG" : "ok");
    }
    return report.all_pass ? 0 : kExitFlagged;
}

int cmd_maximal(const std::string& config_path, int workers, std::uint64_t seed_override,
                bool has_seed, const std::string& out_override,
                const std::string& format_override) {
    ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
    if (has_seed) cfg.seed = seed_override;
    if (!out_override.empty()) cfg.out_path = out_override;
    if (!format_override.empty()) cfg.format = format_override;
    if (!(cfg.p > 1.0)) throw ConfigError("maximal requires p > 1");
    const MeasureFamily family = resolve_family(cfg.family);
    const std::vector<double> grid = resolve_grid(cfg);
    MaximalEstimate estimate;
    if (cfg.action == "modular") {
        const auto obs = resolve_modular_observable(cfg);
        const auto starts = resolve_modular_starts(cfg);
        estimate = maximal_ratio(family, ModularAction{}, obs, starts, grid, cfg.p,
                                 cfg.maximal_n, cfg.seed, workers);
    } else {
        throw ConfigError("maximal supports the modular action");
    }
    emit_maximal(cfg.out_path, cfg.format, cfg, estimate);
    std::printf("p=%g starts=%zu ratio=%.6f f_norm=%.6f\n", estimate.p,
                estimate.per_start_max.size(), estimate.ratio, estimate.f_norm);
    return 0;
}

struct CheckFailure {
    std::string name;
    std::string detail;
};

int cmd_check(int workers) {
    (void)workers;
    std::vector<CheckFailure> failures;
    int passed = 0;
    auto run = [&](const std::string& name, bool ok, const std::string& detail = "") {
        if (ok) {
            ++passed;
            std::printf("PASS %s\n", name.c_str());
        } else {
            failures.push_back({name, detail});
            std::printf("FAIL %s %s\n", name.c_str(), detail.c_str());
        }
    };

    {
        Rng rng(42);
        double worst_c = 0.0;
        double worst_i = 0.0;
        for (int i = 0; i < 10000; ++i) {
            double a, b, c, d;
            do {
                a = rng.uniform(-1, 1);
                b = rng.uniform(-1, 1);
                c = rng.uniform(-1, 1);
                d = rng.uniform(-1, 1);
            } while (a * d - b * c <= 1e-3);
            const GroupElement g = GroupElement::normalized(a, b, c, d);
            worst_c = std::max(worst_c, class_distance(reconstruct(cartan_decompose(g)), g));
            worst_i = std::max(worst_i, class_distance(reconstruct(iwasawa_decompose(g)), g));
        }
        run("cartan-round-trip", worst_c <= 1e-9, "worst " + std::to_string(worst_c));
        run("iwasawa-round-trip", worst_i <= 1e-9, "worst " + std::to_string(worst_i));
    }
    {
        const RankOneProfile h2 = RankOneProfile::hyperbolic_plane();
        double worst = 0.0;
        for (int i = 1; i <= 300; ++i) {
            const double r = 30.0 * i / 300.0;
            const double t = radius_to_horocycle(r, h2);
            const double d =
                distance(act(GroupElement::translation(t), basepoint()), basepoint());
            worst = std::max(worst, std::abs(d - r));
        }
        run("horocycle-radius-coherence", worst <= 1e-9, "worst " + std::to_string(worst));
    }
    {
        double worst = 0.0;
        const std::vector<RankOneProfile> profiles = {
            RankOneProfile::hyperbolic_plane(), RankOneProfile::hyperbolic_3space(0.5),
            RankOneProfile::su21(), RankOneProfile::sp21(), RankOneProfile::f4()};
        for (const auto& p : profiles)
            for (double R : {0.5, 1.0, 2.0, 4.0, 8.0})
                worst = std::max(worst, normalization_identity_residual(p, R));
        run("haar-density-identity", worst <= 1e-9, "worst " + std::to_string(worst));
    }
    {
        bool ok = true;
        for (double r = 1.0; r <= 30.0; r += 0.25) {
            const double th = angular_component_theta(r);
            if (th * th > 4.0 * std::exp(-r)) ok = false;
        }
        run("angular-asymptotics", ok);
    }
    {
        const ArcSet u = ArcSet::interval(0.0, 1.0);
        const ArcSet v = ArcSet::interval(1.0, 2.0);
        bool ok = true;
        for (double r : {5.0, 10.0, 20.0, 25.0}) {
            const SectorDomination dom = sector_domination(u, v, r, 0.1);
            if (dom.c_r < 1.0) ok = false;
            if (r >= 20.0 && dom.c_r - 1.0 > 0.01) ok = false;
        }
        run("sector-domination", ok);
    }
    {
        // inverse CDF consistency across kinds
        const RankOneProfile su = RankOneProfile::su21();
        const MeasureFamily fams[] = {MeasureFamily::ball(su), MeasureFamily::shell(su, 0.5),
                                      MeasureFamily::horocycle_window(su, 0.5)};
        double worst = 0.0;
        for (const MeasureFamily& fam : fams) {
            const double r = 3.0;
            const auto [lo, hi] = fam.radial_support(r);
            RadialCdfTable table([&fam](double t) { return fam.radial_density(t); }, lo, hi);
            for (int i = 1; i < 1000; ++i) {
                const double u = static_cast<double>(i) / 1000.0;
                worst = std::max(worst, std::abs(fam.radial_cdf(r, table.invert(u)) - u));
            }
        }
        run("inverse-cdf", worst <= 1e-8, "worst " + std::to_string(worst));
    }
    {
        Rng rng(9);
        bool ok = true;
        for (int i = 0; i < 200; ++i) {
            const ModularPoint x = haar_sample_modular(rng);
            if (!(std::abs(x.base.x) <= 0.5 + 1e-12)) ok = false;
            if (!(x.base.x * x.base.x + x.base.y * x.base.y >= 1.0 - 1e-12)) ok = false;
        }
        run("haar-sample-domain", ok);
    }
    std::printf("%d checks passed, %zu failed\n", passed, failures.size());
    return failures.empty() ? 0 : kExitFlagged;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypererg: averaging families on PSL(2,R) and their ergodic averages"};
    app.require_subcommand(1);

    int workers = 0;
    std::uint64_t seed_override = 0;
    bool has_seed = false;
    std::string out_override;
    std::string format_override;
    app.add_option("--workers", workers, "worker threads (fallback: HYPERERG_WORKERS, then 1)");
    auto* seed_opt = app.add_option("--seed", seed_override, "override the config seed");
    app.add_option("--out", out_override, "override the output path");
    app.add_option("--format", format_override, "override the output format (csv|json|both)")
        ->check(CLI::IsMember({"csv", "json", "both"}));

    auto* dec = app.add_subcommand("decompose", "print Cartan and Iwasawa coordinates");
    std::vector<double> entries;
    dec->add_option("entries", entries, "matrix entries a b c d")->expected(4);

    auto* den = app.add_subcommand("density", "tabulate a radial density");
    std::string profile_name = "psl2";
    std::string which = "psi";
    double t_min = 0.0;
    double t_max = 5.0;
    int t_count = 51;
    den->add_option("--profile", profile_name, "psl2|h3|su21|sp21|f4");
    den->add_option("--which", which, "kak|psi")->check(CLI::IsMember({"kak", "psi"}));
    den->add_option("--t-min", t_min, "grid start");
    den->add_option("--t-max", t_max, "grid end");
    den->add_option("--count", t_count, "grid point count");

    auto* smp = app.add_subcommand("sample", "draw group elements from a family");
    std::string sample_config;
    double sample_r = 5.0;
    std::uint64_t sample_n = 10;
    smp->add_option("config", sample_config, "experiment config file")->required();
    smp->add_option("--r", sample_r, "radius");
    smp->add_option("--n", sample_n, "number of samples");

    auto* conv = app.add_subcommand("converge", "run a convergence sweep from a config");
    std::string converge_config;
    conv->add_option("config", converge_config, "experiment config file")->required();

    auto* maxi = app.add_subcommand("maximal", "empirical maximal-ratio witness from a config");
    std::string maximal_config;
    maxi->add_option("config", maximal_config, "experiment config file")->required();

    auto* chk = app.add_subcommand("check", "run the fast invariant suite");

    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();
    CLI11_PARSE(app, argc, argv);
    has_seed = seed_opt->count() > 0;
    const int w = resolve_workers(workers);

    try {
        if (dec->parsed()) return cmd_decompose(entries);
        if (den->parsed()) return cmd_density(profile_name, which, t_min, t_max, t_count,
                                              out_override);
        if (smp->parsed()) return cmd_sample(sample_config, sample_r, sample_n, seed_override,
                                             has_seed, out_override);
        if (conv->parsed()) return cmd_converge(converge_config, w, seed_override, has_seed,
                                                out_override, format_override);
        if (maxi->parsed()) return cmd_maximal(maximal_config, w, seed_override, has_seed,
                                               out_override, format_override);
        if (chk->parsed()) return cmd_check(w);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
