#include "sepchain/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace sepchain {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - bhat (embedded 4th-order error weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

using State = std::vector<double>;  // (q_1..q_n, p_1..p_n)

// Hamiltonian vector field in the bracket convention dF/dt = {H, F}
State rhs(const ChainSystem& sys, const State& y) {
    const size_t n = y.size() / 2;
    std::vector<Dual<double>> q(y.begin(), y.begin() + static_cast<long>(n));
    std::vector<Dual<double>> p(y.begin() + static_cast<long>(n), y.end());
    State dy(2 * n);
    for (size_t i = 0; i < n; ++i) {
        p[i].d = 1.0;
        dy[i] = eval_hamiltonian<Dual<double>>(sys, q, p).d;
        p[i].d = 0.0;
        q[i].d = 1.0;
        dy[n + i] = -eval_hamiltonian<Dual<double>>(sys, q, p).d;
        q[i].d = 0.0;
    }
    return dy;
}

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
    State out = y;
    for (const auto& [w, k] : terms)
        for (size_t i = 0; i < out.size(); ++i) out[i] += h * w * (*k)[i];
    return out;
}

PhasePoint to_point(const State& y) {
    const size_t n = y.size() / 2;
    return {State(y.begin(), y.begin() + static_cast<long>(n)),
            State(y.begin() + static_cast<long>(n), y.end())};
}

}  // namespace

Trajectory integrate(const ChainSystem& sys, const PhasePoint& x0, double t_max, double rel_tol,
                     double abs_tol) {
    if (!(rel_tol >= 1e-14 && rel_tol <= 1e-3) || !(abs_tol >= 1e-14 && abs_tol <= 1e-3))
        throw ConfigError("integration tolerances must lie in [1e-14, 1e-3]");
    if (!(t_max >= 0) || !std::isfinite(t_max)) throw ConfigError("t_max must be finite and >= 0");
    eval_chain(sys, x0);  // arity + domain check

    Trajectory traj;
    traj.system = sys;
    traj.samples.emplace_back(0.0, x0);
    if (t_max == 0) return traj;

    State y(x0.q);
    y.insert(y.end(), x0.p.begin(), x0.p.end());
    double t = 0.0;
    double h = std::min(1e-3, t_max);
    State k1 = rhs(sys, y);
    traj.stats.min_step = t_max;

    while (t < t_max) {
        h = std::min(h, t_max - t);
        if (!(h > 1e-14 * std::max(1.0, std::abs(t))))
            throw StepUnderflow("step size underflow at t = " + std::to_string(t));
        bool domain_reject = false;
        State ynew;
        double err = 0.0;
        State k7;
        try {
            State k2 = rhs(sys, axpy(y, h, {{a21, &k1}}));
            State k3 = rhs(sys, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
            State k4 = rhs(sys, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
            State k5 = rhs(sys, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
            State k6 = rhs(sys, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
            ynew = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
            k7 = rhs(sys, ynew);  // FSAL
            double acc = 0.0;
            for (size_t i = 0; i < y.size(); ++i) {
                double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                acc += (e / sc) * (e / sc);
            }
            err = std::sqrt(acc / static_cast<double>(y.size()));
        } catch (const DomainViolation&) {
            domain_reject = true;
        }
        if (domain_reject) {
            // a stage left the domain: retry with a smaller step; if that no
            // longer helps, the orbit is genuinely hitting the margin
            ++traj.stats.rejects;
            if (h <= 1e-13 * std::max(1.0, std::abs(t)))
                throw DomainViolation("trajectory entered the eps_dom margin at t = " + std::to_string(t));
            h *= 0.25;
            continue;
        }
        if (err <= 1.0) {
            t += h;
            y = std::move(ynew);
            k1 = std::move(k7);
            traj.samples.emplace_back(t, to_point(y));
            ++traj.stats.steps;
            traj.stats.min_step = std::min(traj.stats.min_step, h);
            traj.stats.max_step = std::max(traj.stats.max_step, h);
        } else {
            ++traj.stats.rejects;
        }
        double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::clamp(fac, 0.2, 5.0);
    }
    return traj;
}

std::vector<double> drift_report(const Trajectory& traj, const std::vector<Observable>& fs) {
    if (traj.samples.empty()) throw ConfigError("drift_report needs a non-empty trajectory");
    std::vector<double> out(fs.size(), 0.0);
    std::vector<cplx> ref(fs.size());
    for (size_t j = 0; j < fs.size(); ++j) ref[j] = fs[j](traj.samples.front().second);
    for (const auto& [t, x] : traj.samples) {
        (void)t;
        for (size_t j = 0; j < fs.size(); ++j) {
            double d = std::abs(fs[j](x) - ref[j]) / std::max(std::abs(ref[j]), 1.0);
            out[j] = std::max(out[j], d);
        }
    }
    return out;
}

}  // namespace sepchain
