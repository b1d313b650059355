#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sepchain/bracket.hpp"
#include "sepchain/sampling.hpp"

using namespace sepchain;

namespace {

ChainSystem harmonic1d() {
    Level lvl;
    lvl.potential.push_back({PotentialKind::HarmonicRadial, 1.0, {}});
    return build_custom({lvl});
}

std::vector<ChainSystem> builtin_systems() {
    return {build_system(FamilyTag::Oscillator3D, 1.0, {1, 2, 3}, {{3, 2}, {5, 3}}),
            build_system(FamilyTag::KeplerCoulomb3D, 1.0, {1, 2, 3}, {{3, 2}, {5, 3}}),
            build_system(FamilyTag::FourDExample, 1.0, {1, 2, 3, 4}, {{2, 1}, {1, 1}, {1, 1}})};
}

}  // namespace

TEST_CASE("gradient pinned values") {
    auto h1 = harmonic1d();
    auto g = gradient(observable_H(h1), {{1.0}, {0.0}});
    CHECK(g[0].real() == doctest::Approx(2.0));
    CHECK(std::abs(g[1]) == doctest::Approx(0.0));

    auto sys = build_system(FamilyTag::Oscillator3D, 1.0, {1, 2, 3}, {{3, 2}, {5, 3}});
    auto x = sample_points(sys, 1, 17)[0];
    auto g3 = gradient(observable_L(sys, 3), x);
    CHECK(std::abs(g3[0]) == doctest::Approx(0.0));  // no r dependence
    CHECK(std::abs(g3[1]) == doctest::Approx(0.0));  // no theta1 dependence
    CHECK(std::abs(g3[3]) == doctest::Approx(0.0));  // no p_r dependence
    CHECK(std::abs(g3[5]) > 0.0);
}

TEST_CASE("gradient matches central differences on all families") {
    const double h = 1e-6;
    for (const auto& sys : builtin_systems()) {
        std::vector<Observable> fs{observable_H(sys), observable_L(sys, 2), observable_L(sys, sys.n)};
        for (const auto& x : sample_points(sys, 100, 23)) {
            for (const auto& f : fs) {
                auto g = gradient(f, x);
                for (int i = 0; i < 2 * sys.n; ++i) {
                    auto xp = x, xm = x;
                    auto& slotp = (i < sys.n) ? xp.q[size_t(i)] : xp.p[size_t(i - sys.n)];
                    auto& slotm = (i < sys.n) ? xm.q[size_t(i)] : xm.p[size_t(i - sys.n)];
                    slotp += h;
                    slotm -= h;
                    cplx fd = (f(xp) - f(xm)) / (2 * h);
                    // 1e-5: central-difference truncation near steep 1/sin^2 walls
                    CHECK(std::abs(g[size_t(i)] - fd) / std::max(1.0, std::abs(fd)) < 1e-5);
                }
            }
        }
    }
}

TEST_CASE("poisson bracket sign convention and antisymmetry") {
    auto sys = build_system(FamilyTag::Oscillator3D, 1.0, {1, 2, 3}, {{3, 2}, {5, 3}});
    auto x = sample_points(sys, 1, 31)[0];
    // the source convention has {p, q} = +1
    CHECK(poisson_bracket(observable_p(1, 3), observable_q(1, 3), x).real() == doctest::Approx(1.0));
    CHECK(poisson_bracket(observable_q(1, 3), observable_p(1, 3), x).real() == doctest::Approx(-1.0));
    auto H = observable_H(sys);
    auto L2 = observable_L(sys, 2);
    cplx ab = poisson_bracket(H, L2, x);
    cplx ba = poisson_bracket(L2, H, x);
    CHECK(std::abs(ab + ba) < 1e-14);
    CHECK(normalized_bracket(H, L2, x) < 1e-12);
    CHECK(normalized_bracket(L2, observable_L(sys, 3), x) < 1e-12);
}

TEST_CASE("Leibniz rule on chain-value products") {
    auto sys = build_system(FamilyTag::Oscillator3D, 1.0, {1, 2, 3}, {{3, 2}, {5, 3}});
    Observable f("pr", [](const auto& x) { return x.p[0]; });
    Observable g = observable_L(sys, 2);
    Observable h = observable_L(sys, 3);
    Observable gh("L2*L3", [sys](const auto& x) {
        using S = std::decay_t<decltype(x.q[0])>;
        auto L = eval_chain_values<S>(sys, x.q, x.p);
        return L[1] * L[2];
    });
    for (const auto& x : sample_points(sys, 20, 37)) {
        cplx lhs = poisson_bracket(f, gh, x);
        cplx rhs = g(x) * poisson_bracket(f, h, x) + h(x) * poisson_bracket(f, g, x);
        CHECK(std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)) < 1e-10);
    }
}

TEST_CASE("Jacobi identity via nested brackets") {
    for (const auto& sys : builtin_systems()) {
        Observable H = observable_H(sys);
        Observable A = observable_q(1, sys.n);
        Observable B("q1*p2^2", [](const auto& x) { return x.q[0] * x.p[1] * x.p[1]; });
        for (const auto& x : sample_points(sys, 10, 41)) {
            cplx j = poisson_bracket(H, bracket_observable(A, B), x) +
                     poisson_bracket(A, bracket_observable(B, H), x) +
                     poisson_bracket(B, bracket_observable(H, A), x);
            double scale = std::max({1.0, std::abs(poisson_bracket(H, bracket_observable(A, B), x))});
            CHECK(std::abs(j) / scale < 1e-8);
        }
    }
}

TEST_CASE("involution matrix") {
    auto sys = build_system(FamilyTag::Oscillator3D, 1.0, {1, 2, 3}, {{3, 2}, {5, 3}});
    auto mat = involution_matrix(sys, sample_points(sys, 100, 43));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(mat[size_t(i)][size_t(j)] <= 1e-9);

    auto h1 = harmonic1d();
    auto m1 = involution_matrix(h1, {{{1.0}, {0.5}}});
    CHECK(m1[0][0] == doctest::Approx(0.0));
}

TEST_CASE("independence rank") {
    auto sys = build_system(FamilyTag::Oscillator3D, 1.0, {1, 2, 3}, {{3, 2}, {5, 3}});
    auto pts = sample_points(sys, 10, 47);
    std::vector<Observable> fs{observable_H(sys), observable_L(sys, 2), observable_L(sys, 3)};
    CHECK(independence_rank(fs, pts).rank == 3);

    Observable L2sq("L2^2", [sys](const auto& x) {
        using S = std::decay_t<decltype(x.q[0])>;
        auto v = eval_chain_values<S>(sys, x.q, x.p)[1];
        return v * v;
    });
    std::vector<Observable> dep{observable_H(sys), observable_L(sys, 2), L2sq};
    CHECK(independence_rank(dep, pts).rank == 2);
}
