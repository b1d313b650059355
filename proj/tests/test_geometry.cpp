#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sepchain/geometry.hpp"
#include "sepchain/sampling.hpp"

using namespace sepchain;

namespace {

ChainSystem osc3(RationalParam k1) {
    return build_system(FamilyTag::Oscillator3D, 1.0, {1, 2, 3}, {k1, {1, 1}});
}

ChainSystem fourd(RationalParam k1, RationalParam k2) {
    return build_system(FamilyTag::FourDExample, 1.0, {1, 2, 3, 4}, {k1, k2, {1, 1}});
}

}  // namespace

TEST_CASE("metric jet pinned derivatives") {
    auto flat = osc3({1, 1});
    std::vector<double> q{1.3, 0.7, 0.5};
    auto jet = metric_jet(flat, q);
    const int n = 3;
    CHECK(jet.g[0] == doctest::Approx(1.0));
    CHECK(jet.g[1] == doctest::Approx(q[0] * q[0]));
    CHECK(jet.g[2] == doctest::Approx(q[0] * q[0] * std::sin(q[1]) * std::sin(q[1])));
    CHECK(jet.dg[1 * n + 0] == doctest::Approx(2 * q[0]));  // d_r g_22 = 2r

    auto k32 = osc3({3, 2});
    auto jet2 = metric_jet(k32, q);
    // g_33 = r^2 sin^2(3 theta1 / 2); d_theta1 g_33 = 3 r^2 sin cos
    double expect = 3.0 * q[0] * q[0] * std::sin(1.5 * q[1]) * std::cos(1.5 * q[1]);
    CHECK(jet2.dg[2 * n + 1] == doctest::Approx(expect));
}

TEST_CASE("metric jet matches central differences") {
    auto sys = fourd({2, 1}, {1, 1});
    const int n = 4;
    const double h = 1e-4;
    for (const auto& x : sample_points(sys, 5, 61)) {
        auto q = x.q;
        auto jet = metric_jet(sys, q);
        auto gat = [&](std::vector<double> qq) {
            std::vector<double> inv = inverse_metric(sys, qq);
            for (auto& v : inv) v = 1.0 / v;
            return inv;
        };
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                auto qp = q, qm = q;
                qp[size_t(k)] += h;
                qm[size_t(k)] -= h;
                double fd = (gat(qp)[size_t(i)] - gat(qm)[size_t(i)]) / (2 * h);
                double ad = jet.dg[size_t(i * n + k)];
                CHECK(std::abs(ad - fd) / std::max(1.0, std::abs(fd)) < 1e-6);
                for (int l = 0; l < n; ++l) {
                    auto jp = metric_jet(sys, qp), jm = metric_jet(sys, qm);
                    double fd2 = (jp.dg[size_t(i * n + l)] - jm.dg[size_t(i * n + l)]) / (2 * h);
                    CHECK(std::abs(jet.d2g[size_t((i * n + l) * n + k)] - fd2) / std::max(1.0, std::abs(fd2)) <
                          1e-5);
                    for (int m = 0; m < n; ++m) {
                        double fd3 =
                            (jp.d2g[size_t((i * n + l) * n + m)] - jm.d2g[size_t((i * n + l) * n + m)]) /
                            (2 * h);
                        CHECK(std::abs(jet.d3g[size_t(((i * n + l) * n + m) * n + k)] - fd3) /
                                  std::max(1.0, std::abs(fd3)) <
                              1e-4);
                    }
                }
            }
        // symmetry of mixed partials
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    CHECK(jet.d2g[size_t((i * n + k) * n + l)] ==
                          doctest::Approx(jet.d2g[size_t((i * n + l) * n + k)]).epsilon(1e-8));
    }
}

TEST_CASE("flat polar chart has zero curvature") {
    auto flat = osc3({1, 1});
    for (const auto& x : sample_points(flat, 10, 67)) {
        auto rep = curvature(flat, x.q);
        CHECK(rep.max_riemann <= 1e-9);
        CHECK(rep.max_obstruction <= 1e-9);
    }
}

TEST_CASE("Riemann symmetries, Bianchi, and contracted Bianchi") {
    auto sys = fourd({2, 1}, {1, 1});
    const int n = 4;
    auto at = [n](const std::vector<double>& R, int i, int j, int k, int l) {
        return R[size_t(((i * n + j) * n + k) * n + l)];
    };
    for (const auto& x : sample_points(sys, 5, 71)) {
        auto rep = curvature(sys, x.q);
        double scale = 1.0;
        for (double v : rep.riemann) scale = std::max(scale, std::abs(v));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        double r = at(rep.riemann, i, j, k, l);
                        CHECK(std::abs(r + at(rep.riemann, j, i, k, l)) / scale < 1e-8);
                        CHECK(std::abs(r + at(rep.riemann, i, j, l, k)) / scale < 1e-8);
                        CHECK(std::abs(r - at(rep.riemann, k, l, i, j)) / scale < 1e-8);
                        double bianchi =
                            r + at(rep.riemann, i, k, l, j) + at(rep.riemann, i, l, j, k);
                        CHECK(std::abs(bianchi) / scale < 1e-8);
                    }
        // contracted second Bianchi: div of the Einstein tensor vanishes
        auto gamma = christoffel(sys, x.q);
        auto G = [&](int i, int j, int k) { return gamma[size_t((i * n + j) * n + k)]; };
        std::vector<double> ginv = inverse_metric(sys, x.q);
        auto gdiag = [&](int i) { return 1.0 / ginv[size_t(i)]; };
        auto einstein = [&](const CurvatureReport& r2, int i, int j) {
            return r2.ricci[size_t(i * n + j)] - 0.5 * r2.scalar * (i == j ? gdiag(i) : 0.0);
        };
        const double h = 1e-5;
        for (int j = 0; j < n; ++j) {
            double div = 0;
            for (int k = 0; k < n; ++k) {
                auto qp = x.q, qm = x.q;
                qp[size_t(k)] += h;
                qm[size_t(k)] -= h;
                auto rp = curvature(sys, qp), rm = curvature(sys, qm);
                double dG = (einstein(rp, k, j) - einstein(rm, k, j)) / (2 * h);
                double cov = dG;
                for (int l = 0; l < n; ++l)
                    cov -= G(l, k, k) * einstein(rep, l, j) + G(l, k, j) * einstein(rep, k, l);
                div += ginv[size_t(k)] * cov;
            }
            // dominated by the finite-difference truncation of d(Einstein)
            CHECK(std::abs(div) / std::max(scale, 1.0) < 1e-5);
        }
    }
}

TEST_CASE("3D Cotton vanishes for every k1") {
    for (auto k1 : {RationalParam{3, 2}, RationalParam{2, 1}, RationalParam{5, 7}}) {
        auto sys = osc3(k1);
        auto v = flatness_verdict(sys, 20, 73);
        CHECK(v.conformally_flat);
        CHECK_FALSE(v.flat);
        CHECK(v.max_obstruction <= 1e-8);
        CHECK(v.max_riemann > 1e-3);
    }
    auto flat = osc3({1, 1});
    auto v = flatness_verdict(flat, 20, 73);
    CHECK(v.flat);
    CHECK(v.conformally_flat);
}

TEST_CASE("4D Weyl obstruction iff k1 != k2") {
    auto curved = fourd({2, 1}, {1, 1});
    auto v1 = flatness_verdict(curved, 10, 79);
    CHECK_FALSE(v1.conformally_flat);
    CHECK(v1.max_obstruction > 1e-3);

    auto cf = fourd({2, 1}, {2, 1});
    auto v2 = flatness_verdict(cf, 10, 79);
    CHECK(v2.conformally_flat);
    CHECK(v2.max_obstruction <= 1e-8);
    CHECK_FALSE(v2.flat);

    // Weyl is fully traceless
    const int n = 4;
    for (const auto& x : sample_points(curved, 3, 83)) {
        auto rep = curvature(curved, x.q);
        std::vector<double> ginv = inverse_metric(curved, x.q);
        double scale = 1.0;
        for (double w : rep.weyl) scale = std::max(scale, std::abs(w));
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                double tr = 0;
                for (int i = 0; i < n; ++i)
                    tr += ginv[size_t(i)] * rep.weyl[size_t(((i * n + j) * n + i) * n + l)];
                CHECK(std::abs(tr) / scale < 1e-8);
            }
    }
}

TEST_CASE("unsupported dimensions are rejected") {
    Level l1, l2;
    l1.potential.push_back({PotentialKind::HarmonicRadial, 1.0, {}});
    l1.coupling = CouplingTerm{CouplingKind::InvRadialSq, {}};
    l2.potential.push_back({PotentialKind::InvCosSq, 1.0, {1, 1}});
    auto sys2 = build_custom({l1, l2});
    CHECK_THROWS_AS(flatness_verdict(sys2, 5, 89), ConfigError);
}
