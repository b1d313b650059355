#pragma once

#include <array>
#include <functional>
#include <optional>
#include <random>

#include "sepchain/bracket.hpp"
#include "sepchain/system.hpp"

namespace sepchain {

// (cosh X, sinh X) carrier for an angle-like quantity X; X itself is never
// evaluated, so no inverse-hyperbolic branch choices arise.
template <class T>
struct HypPairT {
    T c{};
    T s{};
};
using HypPair = HypPairT<cplx>;

// relative defect of cosh^2 - sinh^2 = 1
inline double pair_invariant_error(const HypPair& a) {
    cplx r = a.c * a.c - a.s * a.s - 1.0;
    double scale = std::max({std::norm(a.c), std::norm(a.s), 1.0});
    return std::abs(r) / scale;
}

namespace detail {
// unchecked addition-formula composition; also valid for unnormalized pairs
template <class T>
HypPairT<T> pair_mul(const HypPairT<T>& a, const HypPairT<T>& b) {
    return {a.c * b.c + a.s * b.s, a.c * b.s + a.s * b.c};
}
template <class T>
HypPairT<T> pair_conj(const HypPairT<T>& a) {
    return {a.c, -a.s};
}
// repeated squaring; n < 0 via the conjugate pair
template <class T>
HypPairT<T> pair_pow(HypPairT<T> a, long n) {
    if (n < 0) {
        a = pair_conj(a);
        n = -n;
    }
    HypPairT<T> acc{T(1.0), T(0.0)};
    while (n > 0) {
        if (n & 1) acc = pair_mul(acc, a);
        a = pair_mul(a, a);
        n >>= 1;
    }
    return acc;
}
}  // namespace detail

HypPair hyp_mul(const HypPair& a, const HypPair& b);
HypPair hyp_pow(const HypPair& a, long n);

// Per-level pair data: B_i from the M_i quadrature, A_i from N_i.
// "u" variants are unnormalized (cosh*d, sinh*d); dA/dB are the discriminant
// square roots from the tables.
template <class S>
struct LevelPairs {
    HypPairT<S> B, A;
    HypPairT<S> Bu, Au;
    S dB{}, dA{};
};

// integer combination sinh(m*A_i - n*B_i); sigma = 1 when one sqrt(L_{i+1})
// factor is left over (m+n even) and the numerator must be divided by it
struct AngleCombo {
    long m = 0;
    long n = 0;
    int sigma = 0;
};

struct PolyConstant {
    std::string label;
    AngleCombo combo;
    cplx raw_value{};
    cplx denominator{};
    cplx numerator_value{};
    std::optional<int> measured_degree;
};

namespace detail {

struct RadialInfo {
    bool kepler = false;
    double alpha = 0.0;
};
RadialInfo radial_info(const ChainSystem& sys);

struct AngularLevel {
    double k = 1.0;
    RationalParam krat{};
    double b_cos = 0.0;  // coefficient of 1/cos^2(k theta)
    double b_sin = 0.0;  // coefficient of 1/sin^2(k theta), last level only
};
// chain level j in 2..n, in standard angular form
AngularLevel angular_level(const ChainSystem& sys, int j);

inline void check_discriminant(double m2, double scale, const char* what) {
    if (!(m2 > 1e-12 * scale))
        throw DegenerateOrbit(std::string("vanishing discriminant in ") + what);
}

constexpr cplx kI{0.0, 1.0};

// A-pair at chain level j (the N_{j-1} quadrature over theta_{j-1})
template <class S>
void make_angular_A(const AngularLevel& lv, const S& Lj, const S& Lam, const S& theta, const S& pth,
                    LevelPairs<S>& out) {
    S d2 = ipow(lv.b_cos - Lj - Lam, 2) - 4.0 * Lj * Lam;
    double scale = std::max({mag(ipow(lv.b_cos - Lj - Lam, 2)), 4.0 * mag(Lj) * mag(Lam), 1.0});
    check_discriminant(mag(d2), scale, "angular A pair");
    out.dA = sqrt(d2);
    S c = sqrt(Lj) * sin(2.0 * lv.k * theta) * pth;
    S s = kI * (Lj * cos(2.0 * lv.k * theta) + Lam - lv.b_cos);
    out.Au = {c, s};
    out.A = {c / out.dA, s / out.dA};
}

// B-pair at chain level j (the M_j quadrature over theta_{j-1})
template <class S>
void make_angular_B(const AngularLevel& lv, const S& Lj, const S& Lam, const S& theta, const S& pth,
                    LevelPairs<S>& out) {
    S d2 = 4.0 * lv.b_cos * Lj - ipow(Lam - Lj - lv.b_cos, 2);
    double scale = std::max({mag(ipow(Lam - Lj - lv.b_cos, 2)), 4.0 * std::abs(lv.b_cos) * mag(Lj), 1.0});
    check_discriminant(mag(d2), scale, "angular B pair");
    out.dB = sqrt(d2);
    S sn = sin(lv.k * theta);
    S c = -2.0 * kI * sqrt(Lam) * (cos(lv.k * theta) / sn) * pth;
    S s = 2.0 * Lam / (sn * sn) + lv.b_cos - Lj - Lam;
    out.Bu = {c, s};
    out.B = {c / out.dB, s / out.dB};
}

template <class S>
void make_radial_B(const RadialInfo& ri, const S& H, const S& L2, const S& r, const S& pr,
                   LevelPairs<S>& out) {
    if (ri.kepler) {
        S d2 = ri.alpha * ri.alpha + 4.0 * H * L2;
        double scale = std::max({ri.alpha * ri.alpha, 4.0 * mag(H) * mag(L2), 1.0});
        check_discriminant(mag(d2), scale, "radial Kepler pair (circular-orbit degeneracy)");
        out.dB = sqrt(d2);
        S c = 2.0 * sqrt(L2) * pr;
        S s = kI * (ri.alpha + 2.0 * L2 / r);
        out.Bu = {c, s};
        out.B = {c / out.dB, s / out.dB};
    } else {
        S d2 = H * H - 4.0 * ri.alpha * L2;
        double scale = std::max({mag(H) * mag(H), 4.0 * std::abs(ri.alpha) * mag(L2), 1.0});
        check_discriminant(mag(d2), scale, "radial oscillator pair");
        out.dB = sqrt(d2);
        S c = -2.0 * sqrt(L2) * pr / r;
        S s = kI * (H - 2.0 * L2 / (r * r));
        out.Bu = {c, s};
        out.B = {c / out.dB, s / out.dB};
    }
}

}  // namespace detail

// Pairs for L'_i = N_i - M_i, i in 1..n-1, from the evaluated chain values L.
template <class S>
LevelPairs<S> level_pairs(const ChainSystem& sys, int level, std::span<const S> q, std::span<const S> p,
                          const std::vector<S>& L) {
    if (level < 1 || level >= sys.n) throw ConfigError("pair level out of range");
    LevelPairs<S> out;
    if (level == 1) {
        detail::make_radial_B(detail::radial_info(sys), L[0], L[1], q[0], p[0], out);
    } else {
        // B_i at chain level i; any 1/sin^2 potential folds into Lambda
        auto lv = detail::angular_level(sys, level);
        S Lam = S(lv.b_sin) + L[level];
        detail::make_angular_B(lv, L[level - 1], Lam, q[level - 1], p[level - 1], out);
    }
    // A_i at chain level i+1, where L_{n+1} = 0
    auto lvA = detail::angular_level(sys, level + 1);
    S Lam = S(lvA.b_sin) + ((level + 1 == sys.n) ? S(0.0) : L[level + 1]);
    detail::make_angular_A(lvA, L[level], Lam, q[level], p[level], out);
    return out;
}

AngleCombo angle_combo(const ChainSystem& sys, int level);

// per-family pair accessors
std::array<HypPair, 4> pairs_oscillator3d(const ChainSystem& sys, const PhasePoint& x);
HypPair pair_radial_kepler(const ChainSystem& sys, const PhasePoint& x);
std::array<HypPair, 6> pairs_4d_example(const ChainSystem& sys, const PhasePoint& x);

// the constructed constant of motion at the given chain level
PolyConstant poly_constant(const ChainSystem& sys, const PhasePoint& x, int level,
                           bool measure_degree = false, int dmax = 12, unsigned seed = 12345);

// sinh(m A - n B) at x, from the composed pairs
cplx composed_sinh(const ChainSystem& sys, const PhasePoint& x, int level);

// polynomial numerator (raw * denominator) as an observable, AD-friendly
Observable numerator_observable(const ChainSystem& sys, int level);
// the sinh combination itself
Observable raw_observable(const ChainSystem& sys, int level);

// template core for the numerator, used by the observable and the probes
template <class S>
S numerator_value_t(const ChainSystem& sys, int level, std::span<const S> q, std::span<const S> p) {
    auto L = eval_chain_values<S>(sys, q, p);
    auto pr = level_pairs<S>(sys, level, q, p, L);
    auto combo = angle_combo(sys, level);
    auto prod = detail::pair_mul(detail::pair_pow(pr.Au, combo.m), detail::pair_pow(detail::pair_conj(pr.Bu), combo.n));
    S num = prod.s;
    if (combo.sigma) num = num / sqrt(L[level]);
    return num;
}

template <class S>
S raw_value_t(const ChainSystem& sys, int level, std::span<const S> q, std::span<const S> p) {
    auto L = eval_chain_values<S>(sys, q, p);
    auto pr = level_pairs<S>(sys, level, q, p, L);
    auto combo = angle_combo(sys, level);
    return detail::pair_mul(detail::pair_pow(pr.A, combo.m), detail::pair_pow(detail::pair_conj(pr.B), combo.n)).s;
}

// Named low-degree constants extracted from the generic numerators
// (the k = 1 degenerations and the 4D example).
Observable kepler_reduced_quartic(const ChainSystem& sys);
Observable fourd_quartic_1(const ChainSystem& sys, bool as_printed = false);
Observable fourd_quartic_2(const ChainSystem& sys);
Observable fourd_cubic_3(const ChainSystem& sys);

// numerator observables the verification suites use for rank/degree claims:
// the generic ones, with the hard-coded reduced constants substituted where
// a lower-degree named form exists
std::vector<Observable> family_poly_numerators(const ChainSystem& sys);

// 4D explicit displayed quotients for sinh(A1-2B1), sinh(2A2-B2), sinh(A3-B3);
// `corrected` applies the factor-2 fix on the second display
cplx fourd_display_sinh(const ChainSystem& sys, const PhasePoint& x, int which, bool corrected = true);

// polynomial momentum degree by vanishing forward differences along 8 random
// momentum lines; nullopt when the function is not polynomial up to dmax
std::optional<int> degree_probe(const Observable& f, const std::vector<double>& q_fixed, int dmax,
                                unsigned seed, double tol = 1e-8);

}  // namespace sepchain
