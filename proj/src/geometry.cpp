#include "sepchain/geometry.hpp"

#include <cmath>

#include "sepchain/sampling.hpp"

namespace sepchain {

namespace {

template <class T>
std::vector<T> metric_at(const ChainSystem& sys, const std::vector<T>& q) {
    return metric_diag<T>(sys, std::span<const T>(q));
}

// Gamma^i_{jk} for a diagonal metric; returns values and fills g as a side
// product. Flat layout [i*n*n + j*n + k].
template <class T>
std::vector<T> christoffel_t(const ChainSystem& sys, const std::vector<T>& q, std::vector<T>* g_out = nullptr) {
    const int n = sys.n;
    std::vector<Dual<T>> qd(q.begin(), q.end());
    std::vector<T> g(static_cast<size_t>(n));
    std::vector<T> dg(static_cast<size_t>(n * n));  // dg[i*n+k] = d_k g_i
    for (int k = 0; k < n; ++k) {
        qd[k].d = T(1.0);
        auto gm = metric_at<Dual<T>>(sys, qd);
        qd[k].d = T(0.0);
        for (int i = 0; i < n; ++i) {
            dg[static_cast<size_t>(i * n + k)] = gm[static_cast<size_t>(i)].d;
            if (k == 0) g[static_cast<size_t>(i)] = gm[static_cast<size_t>(i)].v;
        }
    }
    std::vector<T> gamma(static_cast<size_t>(n * n * n), T(0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                T acc(0.0);
                if (i == k) acc = acc + dg[static_cast<size_t>(i * n + j)];
                if (i == j) acc = acc + dg[static_cast<size_t>(i * n + k)];
                if (j == k) acc = acc - dg[static_cast<size_t>(j * n + i)];
                gamma[static_cast<size_t>((i * n + j) * n + k)] = acc / (2.0 * g[static_cast<size_t>(i)]);
            }
    if (g_out) *g_out = g;
    return gamma;
}

template <class T>
struct CurvatureT {
    std::vector<T> g;        // diagonal metric
    std::vector<T> riemann;  // R_{ijkl}
    std::vector<T> ricci;    // R_{jl}
    T scalar{};
};

template <class T>
CurvatureT<T> curvature_t(const ChainSystem& sys, const std::vector<T>& q) {
    const int n = sys.n;
    CurvatureT<T> out;
    auto gamma = christoffel_t<T>(sys, q, &out.g);
    // dgamma[((i*n+j)*n+k)*n + m] = d_m Gamma^i_{jk}
    std::vector<T> dgamma(static_cast<size_t>(n * n * n * n));
    std::vector<Dual<T>> qd(q.begin(), q.end());
    for (int m = 0; m < n; ++m) {
        qd[m].d = T(1.0);
        auto gd = christoffel_t<Dual<T>>(sys, qd);
        qd[m].d = T(0.0);
        for (int idx = 0; idx < n * n * n; ++idx)
            dgamma[static_cast<size_t>(idx * n + m)] = gd[static_cast<size_t>(idx)].d;
    }
    auto G = [&](int i, int j, int k) -> const T& { return gamma[static_cast<size_t>((i * n + j) * n + k)]; };
    auto dG = [&](int i, int j, int k, int m) -> const T& {
        return dgamma[static_cast<size_t>(((i * n + j) * n + k) * n + m)];
    };
    out.riemann.assign(static_cast<size_t>(n * n * n * n), T(0.0));
    out.ricci.assign(static_cast<size_t>(n * n), T(0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    // R^i_{jkl} = d_k Gamma^i_{lj} - d_l Gamma^i_{kj} + sums
                    T r = dG(i, l, j, k) - dG(i, k, j, l);
                    for (int m = 0; m < n; ++m) r = r + G(i, k, m) * G(m, l, j) - G(i, l, m) * G(m, k, j);
                    out.riemann[static_cast<size_t>(((i * n + j) * n + k) * n + l)] =
                        out.g[static_cast<size_t>(i)] * r;
                    out.ricci[static_cast<size_t>(j * n + l)] =
                        out.ricci[static_cast<size_t>(j * n + l)] + ((i == k) ? r : T(0.0));
                }
    out.scalar = T(0.0);
    for (int j = 0; j < n; ++j)
        out.scalar = out.scalar + out.ricci[static_cast<size_t>(j * n + j)] / out.g[static_cast<size_t>(j)];
    return out;
}

}  // namespace

MetricJet metric_jet(const ChainSystem& sys, const std::vector<double>& q) {
    if (static_cast<int>(q.size()) != sys.n) throw ConfigError("coordinate arity mismatch");
    const int n = sys.n;
    using D3 = Dual<Dual<Dual<double>>>;
    MetricJet jet;
    jet.n = n;
    jet.g.assign(static_cast<size_t>(n), 0.0);
    jet.dg.assign(static_cast<size_t>(n * n), 0.0);
    jet.d2g.assign(static_cast<size_t>(n * n * n), 0.0);
    jet.d3g.assign(static_cast<size_t>(n * n * n * n), 0.0);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            for (int m = 0; m < n; ++m) {
                std::vector<D3> qd(static_cast<size_t>(n));
                for (int j = 0; j < n; ++j) {
                    D3 v{};
                    v.v.v.v = q[static_cast<size_t>(j)];
                    if (j == k) v.v.v.d = 1.0;  // innermost seed
                    if (j == l) v.v.d.v = 1.0;
                    if (j == m) v.d.v.v = 1.0;  // outermost seed
                    qd[static_cast<size_t>(j)] = v;
                }
                auto gm = metric_at<D3>(sys, qd);
                for (int i = 0; i < n; ++i) {
                    const D3& e = gm[static_cast<size_t>(i)];
                    jet.g[static_cast<size_t>(i)] = e.v.v.v;
                    jet.dg[static_cast<size_t>(i * n + k)] = e.v.v.d;
                    jet.d2g[static_cast<size_t>((i * n + k) * n + l)] = e.v.d.d;
                    jet.d3g[static_cast<size_t>(((i * n + k) * n + l) * n + m)] = e.d.d.d;
                }
            }
    return jet;
}

std::vector<double> christoffel(const ChainSystem& sys, const std::vector<double>& q) {
    if (static_cast<int>(q.size()) != sys.n) throw ConfigError("coordinate arity mismatch");
    return christoffel_t<double>(sys, q);
}

CurvatureReport curvature(const ChainSystem& sys, const std::vector<double>& q) {
    if (static_cast<int>(q.size()) != sys.n) throw ConfigError("coordinate arity mismatch");
    const int n = sys.n;
    CurvatureReport rep;
    rep.point = q;
    rep.n = n;
    auto cv = curvature_t<double>(sys, q);
    rep.riemann = cv.riemann;
    rep.ricci = cv.ricci;
    rep.scalar = cv.scalar;
    const auto& g = cv.g;
    auto fr = [&](int i) { return std::sqrt(g[static_cast<size_t>(i)]); };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double v = rep.riemann[static_cast<size_t>(((i * n + j) * n + k) * n + l)] /
                               (fr(i) * fr(j) * fr(k) * fr(l));
                    rep.max_riemann = std::max(rep.max_riemann, std::abs(v));
                }
    if (n == 3) {
        // covariant derivatives of Ricci and scalar: d_m via one dual level
        auto gamma = christoffel_t<double>(sys, q);
        auto G = [&](int i, int j, int k) { return gamma[static_cast<size_t>((i * n + j) * n + k)]; };
        std::vector<double> dric(static_cast<size_t>(n * n * n));  // d_m R_{ij}
        std::vector<double> dsc(static_cast<size_t>(n));
        std::vector<Dual<double>> qd(q.begin(), q.end());
        for (int m = 0; m < n; ++m) {
            qd[static_cast<size_t>(m)].d = 1.0;
            auto cd = curvature_t<Dual<double>>(sys, qd);
            qd[static_cast<size_t>(m)].d = 0.0;
            for (int idx = 0; idx < n * n; ++idx) dric[static_cast<size_t>(idx * n + m)] = cd.ricci[static_cast<size_t>(idx)].d;
            dsc[static_cast<size_t>(m)] = cd.scalar.d;
        }
        auto nabla_ric = [&](int k, int i, int j) {
            double v = dric[static_cast<size_t>((i * n + j) * n + k)];
            for (int l = 0; l < n; ++l)
                v -= G(l, k, i) * cv.ricci[static_cast<size_t>(l * n + j)] +
                     G(l, k, j) * cv.ricci[static_cast<size_t>(i * n + l)];
            return v;
        };
        rep.cotton.assign(static_cast<size_t>(n * n * n), 0.0);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double c = nabla_ric(k, i, j) - nabla_ric(j, i, k);
                    if (i == k) c += 0.25 * dsc[static_cast<size_t>(j)] * g[static_cast<size_t>(i)];
                    if (i == j) c -= 0.25 * dsc[static_cast<size_t>(k)] * g[static_cast<size_t>(i)];
                    rep.cotton[static_cast<size_t>((k * n + i) * n + j)] = c;
                    rep.max_obstruction =
                        std::max(rep.max_obstruction, std::abs(c / (fr(k) * fr(i) * fr(j))));
                }
    } else if (n == 4) {
        rep.weyl.assign(static_cast<size_t>(n * n * n * n), 0.0);
        auto Ric = [&](int i, int j) { return cv.ricci[static_cast<size_t>(i * n + j)]; };
        auto gd = [&](int i, int j) { return i == j ? g[static_cast<size_t>(i)] : 0.0; };
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        double w = rep.riemann[static_cast<size_t>(((i * n + j) * n + k) * n + l)];
                        w -= 0.5 * (gd(i, k) * Ric(j, l) - gd(i, l) * Ric(j, k) + gd(j, l) * Ric(i, k) -
                                    gd(j, k) * Ric(i, l));
                        w += (cv.scalar / 6.0) * (gd(i, k) * gd(j, l) - gd(i, l) * gd(j, k));
                        rep.weyl[static_cast<size_t>(((i * n + j) * n + k) * n + l)] = w;
                        rep.max_obstruction =
                            std::max(rep.max_obstruction, std::abs(w / (fr(i) * fr(j) * fr(k) * fr(l))));
                    }
    }
    // other n: Riemann/Ricci/scalar only, no conformal obstruction tensor
    return rep;
}

FlatnessVerdict flatness_verdict(const ChainSystem& sys, int sample_count, unsigned seed) {
    if (sys.n != 3 && sys.n != 4)
        throw ConfigError("flatness_verdict supports n = 3 and n = 4 only");
    if (sample_count < 1) throw ConfigError("sample_count must be positive");
    std::mt19937 rng(seed);
    FlatnessVerdict v;
    for (int s = 0; s < sample_count; ++s) {
        auto q = sample_point(sys, rng).q;
        auto rep = curvature(sys, q);
        v.max_riemann = std::max(v.max_riemann, rep.max_riemann);
        v.max_obstruction = std::max(v.max_obstruction, rep.max_obstruction);
        v.points.push_back(q);
    }
    v.flat = v.max_riemann <= 1e-7;
    v.conformally_flat = v.max_obstruction <= 1e-7;
    return v;
}

}  // namespace sepchain
