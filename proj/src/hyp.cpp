#include "sepchain/hyp.hpp"

#include <algorithm>
#include <cmath>

namespace sepchain {

HypPair hyp_mul(const HypPair& a, const HypPair& b) {
    if (pair_invariant_error(a) > 1e-8 || pair_invariant_error(b) > 1e-8)
        throw ConfigError("hyp_mul input violates cosh^2 - sinh^2 = 1");
    return detail::pair_mul(a, b);
}

HypPair hyp_pow(const HypPair& a, long n) {
    if (pair_invariant_error(a) > 1e-8) throw ConfigError("hyp_pow input violates cosh^2 - sinh^2 = 1");
    return detail::pair_pow(a, n);
}

namespace detail {

RadialInfo radial_info(const ChainSystem& sys) {
    RadialInfo ri;
    for (const auto& t : sys.levels[0].potential) {
        if (t.kind == PotentialKind::KeplerRadial) {
            ri.kepler = true;
            ri.alpha = t.coefficient;
        } else if (t.kind == PotentialKind::HarmonicRadial) {
            ri.alpha = t.coefficient;
        } else {
            throw ConfigError("level 1 not in standard radial form for pair construction");
        }
    }
    if (!sys.levels[0].coupling || sys.levels[0].coupling->kind != CouplingKind::InvRadialSq)
        throw ConfigError("level 1 needs the 1/r^2 coupling for pair construction");
    return ri;
}

AngularLevel angular_level(const ChainSystem& sys, int j) {
    if (j < 2 || j > sys.n) throw ConfigError("angular level out of range");
    const Level& lvl = sys.levels[static_cast<size_t>(j - 1)];
    AngularLevel out;
    std::optional<RationalParam> krat;
    auto take_k = [&](const RationalParam& k) {
        if (krat && !(k == *krat))
            throw ConfigError("level " + std::to_string(j) + " mixes different angular parameters");
        krat = k;
    };
    for (const auto& t : lvl.potential) {
        if (t.kind == PotentialKind::InvCosSq) {
            out.b_cos += t.coefficient;
            take_k(t.k);
        } else if (t.kind == PotentialKind::InvSinSq) {
            out.b_sin += t.coefficient;
            take_k(t.k);
        } else {
            throw ConfigError("level " + std::to_string(j) + " not in standard angular form");
        }
    }
    if (lvl.coupling) {
        if (lvl.coupling->kind != CouplingKind::InvSinSq)
            throw ConfigError("level " + std::to_string(j) + " has a non-angular coupling");
        take_k(lvl.coupling->k);
    }
    out.krat = krat.value_or(RationalParam{1, 1});
    out.k = out.krat.value();
    return out;
}

}  // namespace detail

AngleCombo angle_combo(const ChainSystem& sys, int level) {
    if (level < 1 || level >= sys.n) throw ConfigError("combo level out of range");
    // (p_0, q_0) encodes the radial quadrature prefactor 1/(4 k_0 sqrt(-L_2)):
    // k_0 = 1 for the oscillator, 1/2 for Kepler
    long p_prev = 1, q_prev = 1;
    if (level == 1) {
        if (detail::radial_info(sys).kepler) q_prev = 2;
    } else {
        auto kv = detail::angular_level(sys, level).krat;
        p_prev = kv.num;
        q_prev = kv.den;
    }
    auto kv = detail::angular_level(sys, level + 1).krat;
    AngleCombo combo;
    combo.m = p_prev * kv.den;
    combo.n = q_prev * kv.num;
    combo.sigma = ((combo.m + combo.n) % 2 == 0) ? 1 : 0;
    if (combo.m > 64 || combo.n > 64)
        throw ConfigError("integer angle combination exceeds the conditioning cap (|m|,|n| <= 64)");
    return combo;
}

namespace {

PhasePointT<cplx> to_cplx(const PhasePoint& x) {
    return {std::vector<cplx>(x.q.begin(), x.q.end()), std::vector<cplx>(x.p.begin(), x.p.end())};
}

template <class S>
std::vector<LevelPairs<S>> all_pairs(const ChainSystem& sys, const PhasePointT<S>& x) {
    auto L = eval_chain_values<S>(sys, x.q, x.p);
    std::vector<LevelPairs<S>> out;
    for (int i = 1; i < sys.n; ++i) out.push_back(level_pairs<S>(sys, i, x.q, x.p, L));
    return out;
}

}  // namespace

std::array<HypPair, 4> pairs_oscillator3d(const ChainSystem& sys, const PhasePoint& x) {
    if (sys.n != 3) throw ConfigError("pairs_oscillator3d expects a 3D chain");
    auto ps = all_pairs(sys, to_cplx(x));
    return {ps[0].B, ps[0].A, ps[1].B, ps[1].A};
}

HypPair pair_radial_kepler(const ChainSystem& sys, const PhasePoint& x) {
    if (!detail::radial_info(sys).kepler) throw ConfigError("pair_radial_kepler expects a Kepler radial term");
    auto xc = to_cplx(x);
    auto L = eval_chain_values<cplx>(sys, xc.q, xc.p);
    return level_pairs<cplx>(sys, 1, xc.q, xc.p, L).B;
}

std::array<HypPair, 6> pairs_4d_example(const ChainSystem& sys, const PhasePoint& x) {
    if (sys.n != 4) throw ConfigError("pairs_4d_example expects a 4D chain");
    auto ps = all_pairs(sys, to_cplx(x));
    return {ps[0].B, ps[0].A, ps[1].B, ps[1].A, ps[2].B, ps[2].A};
}

cplx composed_sinh(const ChainSystem& sys, const PhasePoint& x, int level) {
    auto xc = to_cplx(x);
    return raw_value_t<cplx>(sys, level, xc.q, xc.p);
}

Observable numerator_observable(const ChainSystem& sys, int level) {
    angle_combo(sys, level);  // validate eagerly
    return Observable("num" + std::to_string(level), [sys, level](const auto& x) {
        using S = std::decay_t<decltype(x.q[0])>;
        return numerator_value_t<S>(sys, level, x.q, x.p);
    });
}

Observable raw_observable(const ChainSystem& sys, int level) {
    angle_combo(sys, level);
    return Observable("raw" + std::to_string(level), [sys, level](const auto& x) {
        using S = std::decay_t<decltype(x.q[0])>;
        return raw_value_t<S>(sys, level, x.q, x.p);
    });
}

PolyConstant poly_constant(const ChainSystem& sys, const PhasePoint& x, int level, bool measure_degree,
                           int dmax, unsigned seed) {
    auto xc = to_cplx(x);
    auto L = eval_chain_values<cplx>(sys, xc.q, xc.p);
    auto pr = level_pairs<cplx>(sys, level, xc.q, xc.p, L);
    auto combo = angle_combo(sys, level);

    PolyConstant out;
    out.label = "L''" + std::to_string(level);
    out.combo = combo;
    out.raw_value = detail::pair_mul(detail::pair_pow(pr.A, combo.m), detail::pair_pow(detail::pair_conj(pr.B), combo.n)).s;
    out.numerator_value = numerator_value_t<cplx>(sys, level, xc.q, xc.p);
    cplx den = ipow(pr.dA, static_cast<int>(combo.m)) * ipow(pr.dB, static_cast<int>(combo.n));
    if (combo.sigma) den /= std::sqrt(L[static_cast<size_t>(level)]);
    out.denominator = den;
    if (!std::isfinite(out.numerator_value.real()) || !std::isfinite(out.numerator_value.imag()))
        throw DegenerateOrbit("non-finite numerator value");
    if (measure_degree) out.measured_degree = degree_probe(numerator_observable(sys, level), x.q, dmax, seed);
    return out;
}

// ---- named reduced constants --------------------------------------------

namespace {
void require_family(const ChainSystem& sys, FamilyTag tag, const char* what) {
    if (sys.family != tag) throw ConfigError(std::string(what) + ": wrong family");
}
void require_k(const ChainSystem& sys, const std::vector<RationalParam>& k, const char* what) {
    if (sys.k != k) throw ConfigError(std::string(what) + ": only defined for its standard k values");
}
}  // namespace

Observable kepler_reduced_quartic(const ChainSystem& sys) {
    require_family(sys, FamilyTag::KeplerCoulomb3D, "kepler_reduced_quartic");
    if (!(sys.k[0] == RationalParam{1, 1}))
        throw ConfigError("kepler_reduced_quartic: only defined for k1 = 1");
    const double alpha = sys.alpha, b1 = sys.beta[0];
    return Observable("K1", [sys, alpha, b1](const auto& x) {
        using S = std::decay_t<decltype(x.q[0])>;
        auto L = eval_chain_values<S>(sys, x.q, x.p);
        const S& H = L[0];
        const S& L2 = L[1];
        const S& L3 = L[2];
        const S& r = x.q[0];
        const S& t1 = x.q[1];
        const S& pr = x.p[0];
        const S& p1 = x.p[1];
        S a = L2 * cos(2.0 * t1) + L3 - b1;
        S u = sin(2.0 * t1) * p1;
        S b = alpha + 2.0 * L2 / r;
        return a * (H - 2.0 * alpha / r - 2.0 * L2 / (r * r)) - u * b * pr -
               0.25 * alpha * alpha * cos(2.0 * t1);
    });
}

Observable fourd_quartic_1(const ChainSystem& sys, bool as_printed) {
    require_family(sys, FamilyTag::FourDExample, "fourd_quartic_1");
    require_k(sys, {{2, 1}, {1, 1}, {1, 1}}, "fourd_quartic_1");
    const double alpha = sys.alpha, b1 = sys.beta[0];
    return Observable(as_printed ? "L''1(verbatim)" : "L''1", [sys, alpha, b1, as_printed](const auto& x) {
        using S = std::decay_t<decltype(x.q[0])>;
        auto L = eval_chain_values<S>(sys, x.q, x.p);
        const S& H = L[0];
        const S& L2 = L[1];
        const S& L3 = L[2];
        const S& r = x.q[0];
        const S& t1 = x.q[1];
        const S& pr = x.p[0];
        const S& p1 = x.p[1];
        if (as_printed) {
            return (H - 2.0 * L2 / (r * r)) * sin(2.0 * t1) / r * p1 * pr +
                   2.0 * (L2 * cos(2.0 * t1) + L3 - b1) * pr * pr / (r * r) -
                   0.25 * (H * H - alpha * L2) * cos(4.0 * t1);
        }
        return (H - 2.0 * L2 / (r * r)) * sin(4.0 * t1) / r * p1 * pr +
               2.0 * (L2 * cos(4.0 * t1) + L3 - b1) * pr * pr / (r * r) -
               0.25 * (H * H - 4.0 * alpha * L2) * cos(4.0 * t1) + alpha * (L3 - b1);
    });
}

Observable fourd_quartic_2(const ChainSystem& sys) {
    require_family(sys, FamilyTag::FourDExample, "fourd_quartic_2");
    require_k(sys, {{2, 1}, {1, 1}, {1, 1}}, "fourd_quartic_2");
    const double b1 = sys.beta[0], b2 = sys.beta[1];
    return Observable("L''2", [sys, b1, b2](const auto& x) {
        using S = std::decay_t<decltype(x.q[0])>;
        auto L = eval_chain_values<S>(sys, x.q, x.p);
        const S& L2 = L[1];
        const S& L3 = L[2];
        const S& L4 = L[3];
        const S& t1 = x.q[1];
        const S& t2 = x.q[2];
        const S& p1 = x.p[1];
        const S& p2 = x.p[2];
        S csc1 = 1.0 / (sin(2.0 * t1) * sin(2.0 * t1));
        S dA2sq = ipow(b2 - L3 - L4, 2) - 4.0 * L3 * L4;
        return 2.0 * (L3 * cos(2.0 * t2) + L4 - b2) * (cos(2.0 * t1) / sin(2.0 * t1)) * sin(2.0 * t2) * p1 * p2 +
               dA2sq * csc1 -
               sin(2.0 * t2) * sin(2.0 * t2) * (2.0 * L3 * csc1 + b1 - L2 - L3) * p2 * p2;
    });
}

Observable fourd_cubic_3(const ChainSystem& sys) {
    require_family(sys, FamilyTag::FourDExample, "fourd_cubic_3");
    require_k(sys, {{2, 1}, {1, 1}, {1, 1}}, "fourd_cubic_3");
    const double b2 = sys.beta[1], b3 = sys.beta[2], b4 = sys.beta[3];
    return Observable("L''3", [sys, b2, b3, b4](const auto& x) {
        using S = std::decay_t<decltype(x.q[0])>;
        auto L = eval_chain_values<S>(sys, x.q, x.p);
        const S& L3 = L[2];
        const S& L4 = L[3];
        const S& t2 = x.q[2];
        const S& t3 = x.q[3];
        const S& p2 = x.p[2];
        const S& p3 = x.p[3];
        return 2.0 * (L4 * cos(2.0 * t3) + b4 - b3) * (cos(t2) / sin(t2)) * p2 -
               (2.0 * L4 / (sin(t2) * sin(t2)) + b2 - L3 - L4) * sin(2.0 * t3) * p3;
    });
}

std::vector<Observable> family_poly_numerators(const ChainSystem& sys) {
    std::vector<Observable> out;
    const std::vector<RationalParam> ones{{1, 1}, {1, 1}};
    if (sys.family == FamilyTag::KeplerCoulomb3D && sys.k[0] == RationalParam{1, 1}) {
        out.push_back(kepler_reduced_quartic(sys));
        out.push_back(numerator_observable(sys, 2));
        return out;
    }
    if (sys.family == FamilyTag::FourDExample && sys.k == std::vector<RationalParam>{{2, 1}, {1, 1}, {1, 1}}) {
        out.push_back(fourd_quartic_1(sys));
        out.push_back(fourd_quartic_2(sys));
        out.push_back(fourd_cubic_3(sys));
        return out;
    }
    for (int i = 1; i < sys.n; ++i) out.push_back(numerator_observable(sys, i));
    return out;
}

cplx fourd_display_sinh(const ChainSystem& sys, const PhasePoint& x, int which, bool corrected) {
    require_family(sys, FamilyTag::FourDExample, "fourd_display_sinh");
    require_k(sys, {{2, 1}, {1, 1}, {1, 1}}, "fourd_display_sinh");
    const double alpha = sys.alpha, b1 = sys.beta[0], b2 = sys.beta[1], b3 = sys.beta[2], b4 = sys.beta[3];
    auto L = eval_chain(sys, x).L;
    const double H = L[0], L2 = L[1], L3 = L[2], L4 = L[3];
    const double r = x.q[0], t1 = x.q[1], t2 = x.q[2], t3 = x.q[3];
    const double pr = x.p[0], p1 = x.p[1], p2 = x.p[2], p3 = x.p[3];
    const cplx I{0.0, 1.0};
    using std::cos;
    using std::sin;
    switch (which) {
        case 1: {
            cplx dA1 = std::sqrt(cplx(ipow(b1 - L2 - L3, 2) - 4 * L2 * L3));
            double a = L2 * cos(4 * t1) + L3 - b1;
            return (4.0 * I * L2 * ((H - 2 * L2 / (r * r)) * sin(4 * t1) / r * p1 * pr + 2 * a * pr * pr / (r * r)) -
                    I * (H * H - 4 * alpha * L2) * a) /
                   ((H * H - 4 * alpha * L2) * dA1);
        }
        case 2: {
            double dA2sq = ipow(b2 - L3 - L4, 2) - 4 * L3 * L4;
            cplx dB2 = std::sqrt(cplx(4 * b1 * L2 - ipow(L3 - L2 - b1, 2)));
            double csc1 = 1.0 / ipow(sin(2 * t1), 2);
            double w = 2 * L3 * csc1 + b1 - L2 - L3;
            double bracket = 2 * (L3 * cos(2 * t2) + L4 - b2) * (cos(2 * t1) / sin(2 * t1)) * sin(2 * t2) * p1 * p2 -
                             ipow(sin(2 * t2), 2) * w * p2 * p2;
            double factor = corrected ? 2.0 : 1.0;
            return factor * L3 * bracket / (dA2sq * dB2) + w / dB2;
        }
        case 3: {
            cplx dB3 = std::sqrt(cplx(4 * b2 * L3 - ipow(L4 - L3 - b2, 2)));
            cplx dA3 = std::sqrt(cplx(ipow(b3 - b4 - L4, 2) - 4 * b4 * L4));
            double num = 2 * (L4 * cos(2 * t3) + b4 - b3) * (cos(t2) / sin(t2)) * p2 -
                         (2 * L4 / ipow(sin(t2), 2) + b2 - L3 - L4) * sin(2 * t3) * p3;
            return std::sqrt(cplx(L4)) * num / (dB3 * dA3);
        }
        default:
            throw ConfigError("display index must be 1, 2 or 3");
    }
}

std::optional<int> degree_probe(const Observable& f, const std::vector<double>& q_fixed, int dmax,
                                unsigned seed, double tol) {
    if (dmax < 0 || dmax > 16) throw ConfigError("degree_probe supports dmax in [0, 16]");
    const size_t n = q_fixed.size();
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    PhasePointT<cplx> x;
    x.q.assign(q_fixed.begin(), q_fixed.end());
    int degree = 0;
    for (int line = 0; line < 8; ++line) {
        std::vector<double> p0(n), u(n);
        for (auto& v : p0) v = unit(rng);
        for (auto& v : u) v = unit(rng);
        std::vector<cplx> vals(static_cast<size_t>(dmax) + 2);
        for (int j = 0; j <= dmax + 1; ++j) {
            x.p.resize(n);
            for (size_t i = 0; i < n; ++i) x.p[i] = p0[i] + j * u[i];
            vals[static_cast<size_t>(j)] = f(x);
        }
        double scale = 1.0;
        for (const auto& v : vals) scale = std::max(scale, std::abs(v));
        // order-m forward differences vanish iff degree < m
        int line_degree = 0;
        auto cur = vals;
        for (int m = 1; m <= dmax + 1; ++m) {
            for (size_t i = 0; i + 1 < cur.size(); ++i) cur[i] = cur[i + 1] - cur[i];
            cur.pop_back();
            double mx = 0;
            for (const auto& v : cur) mx = std::max(mx, std::abs(v));
            if (mx / scale > tol) line_degree = m;
        }
        if (line_degree > dmax) return std::nullopt;  // exceeds dmax
        degree = std::max(degree, line_degree);
    }
    return degree;
}

}  // namespace sepchain
