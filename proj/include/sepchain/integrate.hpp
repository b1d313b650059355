#pragma once

#include <utility>

#include "sepchain/bracket.hpp"
#include "sepchain/system.hpp"

namespace sepchain {

struct StepStats {
    long steps = 0;
    long rejects = 0;
    double min_step = 0.0;
    double max_step = 0.0;
};

struct Trajectory {
    ChainSystem system;
    std::vector<std::pair<double, PhasePoint>> samples;  // strictly increasing t
    StepStats stats;
};

// Adaptive Dormand-Prince 5(4). Samples at accepted controller steps plus the
// endpoint. Aborts with DomainViolation if the state cannot be kept away from
// the eps_dom margin, with StepUnderflow if the controller stalls.
Trajectory integrate(const ChainSystem& sys, const PhasePoint& x0, double t_max, double rel_tol,
                     double abs_tol);

// max_t |f(x(t)) - f(x(0))| / max(|f(x(0))|, 1), one entry per observable
std::vector<double> drift_report(const Trajectory& traj, const std::vector<Observable>& fs);

}  // namespace sepchain
