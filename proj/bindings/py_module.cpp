#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sepchain/geometry.hpp"
#include "sepchain/hyp.hpp"
#include "sepchain/integrate.hpp"
#include "sepchain/report.hpp"
#include "sepchain/sampling.hpp"
#include "sepchain/version.hpp"

namespace py = pybind11;
using namespace sepchain;

namespace {

PhasePoint make_point(const std::vector<double>& q, const std::vector<double>& p, int n) {
    if (int(q.size()) != n || int(p.size()) != n)
        throw ConfigError("q and p must each have length n = " + std::to_string(n));
    return {q, p};
}

std::vector<RationalParam> parse_ks(const std::vector<std::string>& ks) {
    std::vector<RationalParam> out;
    for (const auto& s : ks) out.push_back(RationalParam::parse(s));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "chained separable Hamiltonians: constants of motion and verification suites";
    m.attr("version") = kVersion;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainViolation>(m, "DomainViolation", PyExc_RuntimeError);
    py::register_exception<DegenerateOrbit>(m, "DegenerateOrbit", PyExc_RuntimeError);
    py::register_exception<StepUnderflow>(m, "StepUnderflow", PyExc_RuntimeError);

    py::class_<ChainSystem>(m, "System")
        .def_readonly("n", &ChainSystem::n)
        .def_property_readonly("family", [](const ChainSystem& s) { return family_name(s.family); })
        .def("__repr__", [](const ChainSystem& s) {
            return "<sepchain.System " + family_name(s.family) + " n=" + std::to_string(s.n) + ">";
        });

    m.def(
        "build_system",
        [](const std::string& family, double alpha, const std::vector<double>& beta,
           const std::vector<std::string>& k, double eps_dom) {
            return build_system(family_from_name(family), alpha, beta, parse_ks(k), eps_dom);
        },
        py::arg("family"), py::arg("alpha"), py::arg("beta"), py::arg("k"), py::arg("eps_dom") = 1e-6,
        "construct a built-in family; k entries are rationals like '3/2'");

    m.def(
        "system_from_config", [](const std::string& text) { return parse_config(text).system; },
        py::arg("config_json"), "build the system described by a verifier config document");

    m.def(
        "chain_values",
        [](const ChainSystem& sys, const std::vector<double>& q, const std::vector<double>& p) {
            return eval_chain(sys, make_point(q, p, sys.n)).L;
        },
        py::arg("system"), py::arg("q"), py::arg("p"), "the nested values [L1 (= H), ..., Ln]");

    m.def(
        "flow_field",
        [](const ChainSystem& sys, const std::vector<double>& q, const std::vector<double>& p) {
            auto v = flow_field(sys, make_point(q, p, sys.n));
            const size_t n = size_t(sys.n);
            return py::make_tuple(std::vector<double>(v.begin(), v.begin() + n),
                                  std::vector<double>(v.begin() + n, v.end()));
        },
        py::arg("system"), py::arg("q"), py::arg("p"), "(qdot, pdot) of Hamilton's equations");

    m.def(
        "involution_matrix",
        [](const ChainSystem& sys, int n_points, unsigned seed) {
            return involution_matrix(sys, sample_points(sys, n_points, seed));
        },
        py::arg("system"), py::arg("n_points") = 50, py::arg("seed") = 12345,
        "worst-case normalized |{Li, Lj}| over seeded sample points");

    m.def(
        "independence_rank",
        [](const ChainSystem& sys, int n_points, unsigned seed, double tol) {
            std::vector<Observable> fs;
            for (int i = 1; i <= sys.n; ++i) fs.push_back(observable_L(sys, i));
            for (auto& f : family_poly_numerators(sys)) fs.push_back(std::move(f));
            return independence_rank(fs, sample_points(sys, n_points, seed), tol).rank;
        },
        py::arg("system"), py::arg("n_points") = 20, py::arg("seed") = 12345, py::arg("tol") = 1e-8,
        "numeric rank of the stacked gradients of {L1..Ln} plus the extra constants");

    m.def(
        "poly_constant",
        [](const ChainSystem& sys, const std::vector<double>& q, const std::vector<double>& p, int level,
           bool measure_degree) {
            auto pc = poly_constant(sys, make_point(q, p, sys.n), level, measure_degree);
            py::dict d;
            d["label"] = pc.label;
            d["m"] = pc.combo.m;
            d["n"] = pc.combo.n;
            d["sigma"] = pc.combo.sigma;
            d["raw"] = pc.raw_value;
            d["denominator"] = pc.denominator;
            d["numerator"] = pc.numerator_value;
            d["degree"] = pc.measured_degree ? py::cast(*pc.measured_degree) : py::none();
            return d;
        },
        py::arg("system"), py::arg("q"), py::arg("p"), py::arg("level"), py::arg("measure_degree") = false,
        "the constructed constant of motion at a chain level, evaluated at (q, p)");

    m.def(
        "integrate",
        [](const ChainSystem& sys, const std::vector<double>& q0, const std::vector<double>& p0,
           double t_max, double rel_tol, double abs_tol) {
            auto traj = integrate(sys, make_point(q0, p0, sys.n), t_max, rel_tol, abs_tol);
            std::vector<double> t;
            std::vector<std::vector<double>> q, p;
            for (const auto& [ti, x] : traj.samples) {
                t.push_back(ti);
                q.push_back(x.q);
                p.push_back(x.p);
            }
            std::vector<Observable> fs;
            for (int i = 1; i <= sys.n; ++i) fs.push_back(observable_L(sys, i));
            py::dict d;
            d["t"] = t;
            d["q"] = q;
            d["p"] = p;
            d["steps"] = traj.stats.steps;
            d["rejects"] = traj.stats.rejects;
            d["drift"] = drift_report(traj, fs);
            return d;
        },
        py::arg("system"), py::arg("q0"), py::arg("p0"), py::arg("t_max"), py::arg("rel_tol") = 1e-12,
        py::arg("abs_tol") = 1e-12, "adaptive trajectory with per-L relative drift");

    m.def(
        "flatness_verdict",
        [](const ChainSystem& sys, int samples, unsigned seed) {
            auto v = flatness_verdict(sys, samples, seed);
            py::dict d;
            d["conformally_flat"] = v.conformally_flat;
            d["flat"] = v.flat;
            d["max_obstruction"] = v.max_obstruction;
            d["max_riemann"] = v.max_riemann;
            return d;
        },
        py::arg("system"), py::arg("samples") = 20, py::arg("seed") = 777,
        "sampled conformal-flatness verdict of the kinetic metric (n = 3 or 4)");

    m.def(
        "verify",
        [](const std::string& config_json, py::object seed, py::object suites) {
            auto cfg = parse_config(config_json);
            if (!seed.is_none()) cfg.seed = seed.cast<unsigned>();
            if (!suites.is_none()) cfg.suites = suites.cast<std::vector<std::string>>();
            return report_json(run_suite(cfg)).dump(2);
        },
        py::arg("config_json"), py::arg("seed") = py::none(), py::arg("suites") = py::none(),
        "run the verification suites; returns the JSON report as a string");

    m.def("families", [] {
        return std::vector<std::string>{"oscillator3d", "keplercoulomb3d", "fourd", "custom"};
    });
    m.def("suite_names", [] { return kSuiteNames; });
}
