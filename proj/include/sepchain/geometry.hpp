#pragma once

#include "sepchain/system.hpp"

namespace sepchain {

// Diagonal metric of the kinetic term and its derivatives at a point, all
// computed by nested dual-number differentiation of the closed-form entries.
// Flat layouts: dg[i*n+k] = d_k g_i, d2g[(i*n+k)*n+l], d3g[((i*n+k)*n+l)*n+m].
struct MetricJet {
    int n = 0;
    std::vector<double> g;
    std::vector<double> dg;
    std::vector<double> d2g;
    std::vector<double> d3g;
};

MetricJet metric_jet(const ChainSystem& sys, const std::vector<double>& q);

// Gamma^i_{jk} flattened as [i*n*n + j*n + k]
std::vector<double> christoffel(const ChainSystem& sys, const std::vector<double>& q);

struct CurvatureReport {
    std::vector<double> point;
    int n = 0;
    std::vector<double> riemann;  // R_{ijkl}, n^4, all indices down
    std::vector<double> ricci;    // R_{ij}, n^2
    double scalar = 0.0;
    std::vector<double> cotton;  // C_{kij}, n^3, 3D only
    std::vector<double> weyl;    // W_{ijkl}, n^4, 4D only
    double max_riemann = 0.0;      // max |R| in the orthonormal frame
    double max_obstruction = 0.0;  // max |Cotton| or |Weyl| in the orthonormal frame
};

CurvatureReport curvature(const ChainSystem& sys, const std::vector<double>& q);

struct FlatnessVerdict {
    bool conformally_flat = false;
    bool flat = false;
    double max_obstruction = 0.0;
    double max_riemann = 0.0;
    std::vector<std::vector<double>> points;
};

// Seeded sampling verdict; threshold 1e-7 on frame-normalized tensors.
// Conformal obstruction: Cotton for n=3, Weyl for n=4; other n unsupported.
FlatnessVerdict flatness_verdict(const ChainSystem& sys, int sample_count = 20, unsigned seed = 777);

}  // namespace sepchain
