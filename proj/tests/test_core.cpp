#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sepchain/sampling.hpp"
#include "sepchain/system.hpp"

using namespace sepchain;
constexpr double pi = std::numbers::pi;

namespace {

ChainSystem osc(double alpha, std::vector<double> beta, std::vector<RationalParam> k) {
    return build_system(FamilyTag::Oscillator3D, alpha, beta, k);
}

ChainSystem harmonic1d() {
    Level lvl;
    lvl.potential.push_back({PotentialKind::HarmonicRadial, 1.0, {}});
    return build_custom({lvl});
}

}  // namespace

TEST_CASE("rational parameter validation") {
    CHECK(RationalParam::parse("3/2").value() == doctest::Approx(1.5));
    CHECK(RationalParam::parse("2").num == 2);
    CHECK(RationalParam::parse("2").den == 1);
    CHECK_THROWS_AS(RationalParam::parse("4/2"), ConfigError);
    CHECK_THROWS_AS(RationalParam::parse("0/1"), ConfigError);
    CHECK_THROWS_AS(RationalParam::parse("-3/2"), ConfigError);
    CHECK_THROWS_AS(RationalParam::parse("x"), ConfigError);
}

TEST_CASE("build_system arity and validation errors") {
    CHECK_THROWS_AS(build_system(FamilyTag::Oscillator3D, 1.0, {1, 2}, {{1, 1}, {1, 1}}), ConfigError);
    CHECK_THROWS_AS(build_system(FamilyTag::Oscillator3D, 1.0, {1, 2, 3}, {{1, 1}}), ConfigError);
    CHECK_THROWS_AS(build_system(FamilyTag::FourDExample, 1.0, {1, 2, 3}, {{2, 1}, {1, 1}, {1, 1}}),
                    ConfigError);
    CHECK_NOTHROW(build_system(FamilyTag::KeplerCoulomb3D, 1.0, {1, 2, 3}, {{3, 2}, {5, 3}}));

    // radial term off level 1
    Level l1, l2;
    l1.potential.push_back({PotentialKind::InvCosSq, 1.0, {1, 1}});
    l1.coupling = CouplingTerm{CouplingKind::InvRadialSq, {}};
    l2.potential.push_back({PotentialKind::HarmonicRadial, 1.0, {}});
    CHECK_THROWS_AS(build_custom({l1, l2}), ConfigError);
    // coupling on the last level
    Level l3;
    l3.potential.push_back({PotentialKind::HarmonicRadial, 1.0, {}});
    l3.coupling = CouplingTerm{CouplingKind::InvRadialSq, {}};
    CHECK_THROWS_AS(build_custom({l3}), ConfigError);
}

TEST_CASE("eval_chain pinned values") {
    auto free3 = osc(0.0, {0, 0, 0}, {{1, 1}, {1, 1}});
    auto v = eval_chain(free3, {{1.0, pi / 2, 0.3}, {0.0, 0.0, 2.0}});
    CHECK(v.L[2] == doctest::Approx(4.0));
    CHECK(v.L[1] == doctest::Approx(4.0));
    CHECK(v.hamiltonian() == doctest::Approx(4.0));

    auto sys = osc(0.0, {0, 1, 1}, {{1, 1}, {1, 1}});
    auto w = eval_chain(sys, {{1.0, pi / 2, pi / 4}, {0.0, 0.0, 0.0}});
    CHECK(w.L[2] == doctest::Approx(4.0));
    CHECK(w.L[1] == doctest::Approx(4.0));
    CHECK(w.L[0] == doctest::Approx(4.0));
}

TEST_CASE("recursion consistency of stored chain values") {
    auto sys = build_system(FamilyTag::FourDExample, 1.0, {1, 2, 3, 4}, {{2, 1}, {1, 1}, {1, 1}});
    auto pts = sample_points(sys, 10, 99);
    for (const auto& x : pts) {
        auto L = eval_chain(sys, x).L;
        auto gii = inverse_metric(sys, x.q);
        // rebuild L_i from L_{i+1} directly
        for (int i = sys.n - 1; i >= 0; --i) {
            double val = x.p[size_t(i)] * x.p[size_t(i)];
            for (const auto& t : sys.levels[size_t(i)].potential)
                val += potential_term_value<double>(t, x.q[size_t(i)], sys.eps_dom);
            if (i < sys.n - 1)
                val += coupling_value<double>(*sys.levels[size_t(i)].coupling, x.q[size_t(i)], sys.eps_dom) *
                       L[size_t(i) + 1];
            CHECK(val == doctest::Approx(L[size_t(i)]).epsilon(1e-14));
        }
        (void)gii;
    }
}

TEST_CASE("4D chain matches single-expression Hamiltonian") {
    double a = 1.0;
    std::vector<double> b{1, 2, 3, 4};
    auto sys = build_system(FamilyTag::FourDExample, a, b, {{2, 1}, {1, 1}, {1, 1}});
    auto pts = sample_points(sys, 20, 7);
    for (const auto& x : pts) {
        double r = x.q[0], t1 = x.q[1], t2 = x.q[2], t3 = x.q[3];
        double pr = x.p[0], p1 = x.p[1], p2 = x.p[2], p3 = x.p[3];
        auto sq = [](double u) { return u * u; };
        double L4 = sq(p3) + b[2] / sq(std::cos(t3)) + b[3] / sq(std::sin(t3));
        double L3 = sq(p2) + b[1] / sq(std::cos(t2)) + L4 / sq(std::sin(t2));
        double L2 = sq(p1) + b[0] / sq(std::cos(2 * t1)) + L3 / sq(std::sin(2 * t1));
        double H = sq(pr) + a * sq(r) + L2 / sq(r);
        CHECK(eval_chain(sys, x).hamiltonian() == doctest::Approx(H).epsilon(1e-12));
    }
}

TEST_CASE("flow_field pinned values and finite-difference oracle") {
    auto h1 = harmonic1d();
    auto f = flow_field(h1, {{1.0}, {0.0}});
    CHECK(f[0] == doctest::Approx(0.0));
    CHECK(f[1] == doctest::Approx(-2.0));

    auto free3 = osc(0.0, {0, 0, 0}, {{1, 1}, {1, 1}});
    auto g = flow_field(free3, {{1.0, pi / 2, 0.3}, {0.0, 0.0, 2.0}});
    CHECK(g[0] == doctest::Approx(0.0));
    CHECK(g[1] == doctest::Approx(0.0));
    CHECK(g[2] == doctest::Approx(4.0));
    CHECK(g[3] == doctest::Approx(8.0));
    CHECK(g[4] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(g[5] == doctest::Approx(0.0));

    std::vector<ChainSystem> systems = {
        osc(1.0, {1, 2, 3}, {{3, 2}, {5, 3}}),
        build_system(FamilyTag::KeplerCoulomb3D, 1.0, {1, 2, 3}, {{3, 2}, {5, 3}}),
        build_system(FamilyTag::FourDExample, 1.0, {1, 2, 3, 4}, {{2, 1}, {1, 1}, {1, 1}})};
    const double h = 1e-5;
    for (const auto& sys : systems) {
        for (const auto& x : sample_points(sys, 100, 3)) {
            auto fl = flow_field(sys, x);
            for (int i = 0; i < sys.n; ++i) {
                auto xp = x, xm = x;
                xp.p[size_t(i)] += h;
                xm.p[size_t(i)] -= h;
                double dHdp = (eval_chain(sys, xp).hamiltonian() - eval_chain(sys, xm).hamiltonian()) / (2 * h);
                CHECK(std::abs(fl[size_t(i)] - dHdp) / std::max(1.0, std::abs(dHdp)) < 1e-6);
                xp = x;
                xm = x;
                xp.q[size_t(i)] += h;
                xm.q[size_t(i)] -= h;
                double dHdq = (eval_chain(sys, xp).hamiltonian() - eval_chain(sys, xm).hamiltonian()) / (2 * h);
                CHECK(std::abs(fl[size_t(sys.n + i)] + dHdq) / std::max(1.0, std::abs(dHdq)) < 1e-6);
            }
        }
    }
}

TEST_CASE("inverse metric pinned values and kinetic split") {
    auto sys1 = osc(1.0, {1, 1, 1}, {{1, 1}, {1, 1}});
    auto g1 = inverse_metric(sys1, {2.0, pi / 2, 0.4});
    CHECK(g1[0] == doctest::Approx(1.0));
    CHECK(g1[1] == doctest::Approx(0.25));
    CHECK(g1[2] == doctest::Approx(0.25));

    auto sys2 = osc(1.0, {1, 1, 1}, {{3, 2}, {1, 1}});
    auto g2 = inverse_metric(sys2, {1.0, pi / 6, 0.4});
    CHECK(g2[0] == doctest::Approx(1.0));
    CHECK(g2[1] == doctest::Approx(1.0));
    CHECK(g2[2] == doctest::Approx(2.0));

    auto sys = build_system(FamilyTag::FourDExample, 1.0, {1, 2, 3, 4}, {{2, 1}, {1, 1}, {1, 1}});
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> mom(-2.0, 2.0);
    for (const auto& x0 : sample_points(sys, 10, 11)) {
        auto gii = inverse_metric(sys, x0.q);
        PhasePoint rest{x0.q, std::vector<double>(size_t(sys.n), 0.0)};
        double V = eval_chain(sys, rest).hamiltonian();
        for (int trial = 0; trial < 100; ++trial) {
            PhasePoint x{x0.q, {}};
            double kin = 0;
            for (int i = 0; i < sys.n; ++i) {
                double pi_ = mom(rng);
                x.p.push_back(pi_);
                kin += gii[size_t(i)] * pi_ * pi_;
            }
            CHECK(eval_chain(sys, x).hamiltonian() == doctest::Approx(V + kin).epsilon(1e-12));
        }
    }
}

TEST_CASE("zero-coupling degeneration is the flat polar symbol") {
    auto sys = osc(0.0, {0, 0, 0}, {{1, 1}, {1, 1}});
    for (const auto& x : sample_points(sys, 20, 21)) {
        double r = x.q[0], t1 = x.q[1];
        double expect = x.p[0] * x.p[0] + x.p[1] * x.p[1] / (r * r) +
                        x.p[2] * x.p[2] / (r * r * std::sin(t1) * std::sin(t1));
        CHECK(eval_chain(sys, x).hamiltonian() == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("domain margin") {
    auto sys = osc(1.0, {1, 1, 1}, {{1, 1}, {1, 1}});
    CHECK_THROWS_AS(eval_chain(sys, {{1.0, pi / 2, 0.4}, {0, 0, 0}}), DomainViolation);  // cos(t1) = 0
    CHECK_THROWS_AS(eval_chain(sys, {{1e-9, 0.4, 0.4}, {0, 0, 0}}), DomainViolation);    // r inside margin
    // coefficient-zero terms are structurally absent: sin(t2)=0 is fine when
    // beta_3 = 0 and there is no coupling beyond level 3
    auto relaxed = osc(1.0, {1, 1, 0}, {{1, 1}, {1, 1}});
    CHECK_NOTHROW(eval_chain(relaxed, {{1.0, 0.4, 1e-9}, {0, 0, 0}}));
    CHECK(in_domain(sys, {{1.0, 0.4, 0.4}, {0, 0, 0}}));
    CHECK_FALSE(in_domain(sys, {{1.0, pi / 2, 0.4}, {0, 0, 0}}));
}
