#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sepchain/dual.hpp"
#include "sepchain/errors.hpp"
#include "sepchain/rational.hpp"

namespace sepchain {

enum class PotentialKind { HarmonicRadial, KeplerRadial, InvCosSq, InvSinSq };
enum class CouplingKind { InvRadialSq, InvSinSq };
enum class FamilyTag { Oscillator3D, KeplerCoulomb3D, FourDExample, Custom };

struct PotentialTerm {
    PotentialKind kind;
    double coefficient = 0.0;
    RationalParam k{};  // angular terms only
};

struct CouplingTerm {
    CouplingKind kind;
    RationalParam k{};  // InvSinSq only
};

// One chain level: L_i = p_i^2 + V_i(q_i) + f_i(q_i) L_{i+1}.
// Terms with coefficient 0 are dropped at construction and never evaluated.
struct Level {
    std::vector<PotentialTerm> potential;
    std::optional<CouplingTerm> coupling;
};

struct ChainSystem {
    int n = 0;
    std::vector<Level> levels;
    FamilyTag family = FamilyTag::Custom;
    double alpha = 0.0;
    std::vector<double> beta;
    std::vector<RationalParam> k;
    double eps_dom = 1e-6;
};

struct PhasePoint {
    std::vector<double> q;
    std::vector<double> p;
};

struct ChainValues {
    std::vector<double> L;  // L[0] = L_1 = H ... L[n-1] = L_n
    double hamiltonian() const { return L.front(); }
};

inline constexpr int kMaxDimension = 8;

ChainSystem build_system(FamilyTag family, double alpha, const std::vector<double>& beta,
                         const std::vector<RationalParam>& k, double eps_dom = 1e-6);
ChainSystem build_custom(std::vector<Level> levels, double eps_dom = 1e-6,
                         int max_dimension = kMaxDimension);

std::string family_name(FamilyTag tag);
FamilyTag family_from_name(const std::string& name);

namespace detail {
inline void require_away(double m, double eps, const char* what) {
    if (!(m >= eps)) throw DomainViolation(std::string("evaluation within eps_dom of singular set: ") + what);
    if (!std::isfinite(m)) throw DomainViolation(std::string("non-finite coordinate factor: ") + what);
}
}  // namespace detail

template <class T>
T potential_term_value(const PotentialTerm& t, const T& q, double eps) {
    switch (t.kind) {
        case PotentialKind::HarmonicRadial:
            return t.coefficient * q * q;
        case PotentialKind::KeplerRadial:
            detail::require_away(mag(q), eps, "r = 0 (Kepler term)");
            return t.coefficient / q;
        case PotentialKind::InvCosSq: {
            T c = cos(t.k.value() * q);
            detail::require_away(mag(c), eps, "cos(k q) = 0");
            return t.coefficient / (c * c);
        }
        case PotentialKind::InvSinSq: {
            T s = sin(t.k.value() * q);
            detail::require_away(mag(s), eps, "sin(k q) = 0");
            return t.coefficient / (s * s);
        }
    }
    throw ConfigError("unknown potential kind");
}

// coupling factor f_i(q_i)
template <class T>
T coupling_value(const CouplingTerm& c, const T& q, double eps) {
    switch (c.kind) {
        case CouplingKind::InvRadialSq:
            detail::require_away(mag(q), eps, "r = 0 (coupling)");
            return T(1.0) / (q * q);
        case CouplingKind::InvSinSq: {
            T s = sin(c.k.value() * q);
            detail::require_away(mag(s), eps, "sin(k q) = 0 (coupling)");
            return T(1.0) / (s * s);
        }
    }
    throw ConfigError("unknown coupling kind");
}

// Evaluates the nested values L_n, ..., L_1 at (q, p); result[i] = L_{i+1}.
template <class T>
std::vector<T> eval_chain_values(const ChainSystem& sys, std::span<const T> q, std::span<const T> p) {
    const int n = sys.n;
    std::vector<T> L(static_cast<size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        T val = p[i] * p[i];
        for (const auto& term : sys.levels[i].potential)
            val = val + potential_term_value(term, q[i], sys.eps_dom);
        if (i < n - 1) val = val + coupling_value(*sys.levels[i].coupling, q[i], sys.eps_dom) * L[i + 1];
        L[i] = val;
    }
    return L;
}

template <class T>
T eval_hamiltonian(const ChainSystem& sys, std::span<const T> q, std::span<const T> p) {
    return eval_chain_values(sys, q, p).front();
}

ChainValues eval_chain(const ChainSystem& sys, const PhasePoint& x);
bool in_domain(const ChainSystem& sys, const PhasePoint& x);

// Hamilton's equations for H = L_1 with dF/dt = {H,F}:
// returns (qdot_1..qdot_n, pdot_1..pdot_n)
std::vector<double> flow_field(const ChainSystem& sys, const PhasePoint& x);

// diagonal inverse metric g^{ii}(q): the quadratic form of H in the momenta
template <class T>
std::vector<T> inverse_metric_diag(const ChainSystem& sys, std::span<const T> q) {
    std::vector<T> g(static_cast<size_t>(sys.n));
    g[0] = T(1.0);
    for (int i = 1; i < sys.n; ++i)
        g[i] = g[i - 1] * coupling_value(*sys.levels[i - 1].coupling, q[i - 1], sys.eps_dom);
    return g;
}

std::vector<double> inverse_metric(const ChainSystem& sys, const std::vector<double>& q);

// diagonal metric g_{ii} = 1 / g^{ii}
template <class T>
std::vector<T> metric_diag(const ChainSystem& sys, std::span<const T> q) {
    auto g = inverse_metric_diag(sys, q);
    for (auto& gi : g) gi = T(1.0) / gi;
    return g;
}

}  // namespace sepchain
