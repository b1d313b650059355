#pragma once

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "sepchain/integrate.hpp"
#include "sepchain/system.hpp"

namespace sepchain {

struct Tolerances {
    double bracket_tol = 1e-8;
    double rank_tol = 1e-8;
    double drift_tol = 1e-6;
    double geom_tol = 1e-7;
};

struct TrajectoryParams {
    double t_max = 100.0;
    double rel_tol = 1e-12;
    double abs_tol = 1e-12;
    int n_trajectories = 5;
};

inline const std::vector<std::string> kSuiteNames = {
    "involution", "superintegrability", "conservation", "polynomiality", "geometry", "paper-formulas"};

struct RunConfig {
    ChainSystem system;
    std::vector<std::string> suites;  // subset of kSuiteNames
    unsigned seed = 12345;
    Tolerances tol;
    TrajectoryParams traj;
    std::string report_path;
    std::string traj_dir;
    nlohmann::json echo;  // normalized config echo for the report
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

struct CheckDetail {
    std::string name;
    double residual = 0.0;
    bool pass = false;
    std::string note;
};

struct SuiteResult {
    bool pass = true;
    std::vector<double> residuals;  // worst-case residual per check group
    std::vector<CheckDetail> details;
    double wall_ms = 0.0;
};

struct SuiteReport {
    nlohmann::json config;
    std::map<std::string, SuiteResult> suites;
    std::string version;
    unsigned seed = 0;
    bool all_pass = true;
    std::vector<Trajectory> trajectories;  // from the conservation suite
};

SuiteReport run_suite(const RunConfig& cfg);

// deterministic report document; wall times live in a separate "timing" object
nlohmann::json report_json(const SuiteReport& rep);

std::string trajectory_csv(const Trajectory& traj);

// writes the JSON report (cfg.report_path) and per-trajectory CSVs (cfg.traj_dir)
void emit_outputs(const SuiteReport& rep, const RunConfig& cfg);

}  // namespace sepchain
