#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "sepchain/report.hpp"
#include "sepchain/version.hpp"

using namespace sepchain;

namespace {

int cmd_verify(const std::string& config_path, unsigned seed, bool seed_set,
               const std::vector<std::string>& suites, const std::string& out_path,
               const std::string& traj_dir, double tol_scale) {
    RunConfig cfg = parse_config_file(config_path);
    if (seed_set) {
        cfg.seed = seed;
        cfg.echo["seed"] = seed;
    }
    if (!suites.empty()) {
        for (const auto& s : suites)
            if (std::find(kSuiteNames.begin(), kSuiteNames.end(), s) == kSuiteNames.end())
                throw ConfigError("unknown suite '" + s + "'");
        cfg.suites = suites;
        cfg.echo["suites"] = suites;
    }
    if (tol_scale != 1.0) {
        if (!(tol_scale > 0)) throw ConfigError("--tol-scale must be positive");
        cfg.tol.bracket_tol *= tol_scale;
        cfg.tol.rank_tol *= tol_scale;
        cfg.tol.drift_tol *= tol_scale;
        cfg.tol.geom_tol *= tol_scale;
        cfg.echo["tolerances"] = {{"bracket_tol", cfg.tol.bracket_tol},
                                  {"rank_tol", cfg.tol.rank_tol},
                                  {"drift_tol", cfg.tol.drift_tol},
                                  {"geom_tol", cfg.tol.geom_tol}};
    }
    if (!out_path.empty()) cfg.report_path = out_path;
    if (!traj_dir.empty()) cfg.traj_dir = traj_dir;

    auto rep = run_suite(cfg);
    emit_outputs(rep, cfg);
    if (cfg.report_path.empty()) std::cout << report_json(rep).dump(2) << "\n";
    for (const auto& [name, res] : rep.suites)
        std::cerr << name << ": " << (res.pass ? "pass" : "FAIL") << "\n";
    return rep.all_pass ? 0 : 1;
}

int cmd_families() {
    std::cout << "oscillator3d     n=3  params: alpha, beta[3], k[2] (rationals \"p/q\")\n"
              << "keplercoulomb3d  n=3  params: alpha, beta[3], k[2]\n"
              << "fourd            n=4  params: alpha, beta[4], k[3]\n"
              << "custom           n<=" << kMaxDimension << "  explicit per-level terms in the config\n";
    return 0;
}

int cmd_trajectory(const std::string& config_path, const std::vector<double>& x0, double tmax) {
    RunConfig cfg = parse_config_file(config_path);
    const size_t n = static_cast<size_t>(cfg.system.n);
    if (x0.size() != 2 * n)
        throw ConfigError("--x0 expects " + std::to_string(2 * n) + " values (q then p)");
    PhasePoint x{std::vector<double>(x0.begin(), x0.begin() + static_cast<long>(n)),
                 std::vector<double>(x0.begin() + static_cast<long>(n), x0.end())};
    auto traj = integrate(cfg.system, x, tmax, cfg.traj.rel_tol, cfg.traj.abs_tol);
    std::cout << trajectory_csv(traj);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification workbench for chained separable Hamiltonian systems"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "run verification suites from a config file");
    std::string config_path, out_path, traj_dir;
    std::vector<std::string> suites;
    unsigned seed = 0;
    double tol_scale = 1.0;
    verify->add_option("config", config_path, "path to JSON config")->required();
    auto* seed_opt = verify->add_option("--seed", seed, "override the config seed");
    verify->add_option("--suite", suites, "run only the named suite(s)");
    verify->add_option("--out", out_path, "write the JSON report here");
    verify->add_option("--traj-dir", traj_dir, "write conservation-suite trajectories as CSV here");
    verify->add_option("--tol-scale", tol_scale, "multiply all tolerances by this factor");

    auto* families = app.add_subcommand("families", "list built-in families and parameter arities");

    auto* trajectory = app.add_subcommand("trajectory", "integrate one trajectory and print CSV");
    std::string tconfig;
    std::vector<double> x0;
    double tmax = 10.0;
    trajectory->add_option("config", tconfig, "path to JSON config")->required();
    trajectory->add_option("--x0", x0, "initial phase point: q1..qn p1..pn")->required()->expected(-2);
    trajectory->add_option("--tmax", tmax, "integration time")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*verify)
            return cmd_verify(config_path, seed, seed_opt->count() > 0, suites, out_path, traj_dir, tol_scale);
        if (*families) return cmd_families();
        if (*trajectory) return cmd_trajectory(tconfig, x0, tmax);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
