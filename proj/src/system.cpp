#include "sepchain/system.hpp"

#include <algorithm>

namespace sepchain {

namespace {

bool is_radial(PotentialKind k) {
    return k == PotentialKind::HarmonicRadial || k == PotentialKind::KeplerRadial;
}

void validate_levels(const std::vector<Level>& levels, int max_dimension) {
    const int n = static_cast<int>(levels.size());
    if (n < 1) throw ConfigError("chain needs at least one level");
    if (n > max_dimension)
        throw ConfigError("dimension " + std::to_string(n) + " exceeds cap " + std::to_string(max_dimension));
    for (int i = 0; i < n; ++i) {
        for (const auto& t : levels[i].potential) {
            if (is_radial(t.kind) && i != 0)
                throw ConfigError("radial potential term only admissible at chain level 1");
            if (!is_radial(t.kind)) t.k.validate();
        }
        if (i == n - 1) {
            if (levels[i].coupling)
                throw ConfigError("last chain level must have no coupling (L_{n+1} = 0)");
        } else {
            if (!levels[i].coupling)
                throw ConfigError("inner chain level " + std::to_string(i + 1) + " needs a coupling term");
            const auto& c = *levels[i].coupling;
            if (c.kind == CouplingKind::InvRadialSq && i != 0)
                throw ConfigError("1/r^2 coupling only admissible at chain level 1");
            if (c.kind == CouplingKind::InvSinSq && i == 0)
                throw ConfigError("1/sin^2 coupling only admissible at levels >= 2");
            if (c.kind == CouplingKind::InvSinSq) c.k.validate();
        }
    }
}

void drop_zero_terms(std::vector<Level>& levels) {
    for (auto& lvl : levels)
        std::erase_if(lvl.potential, [](const PotentialTerm& t) { return t.coefficient == 0.0; });
}

// the generalized oscillator / Kepler-Coulomb chain in n dimensions
std::vector<Level> standard_chain(int n, PotentialKind radial, double alpha,
                                  const std::vector<double>& beta, const std::vector<RationalParam>& k) {
    std::vector<Level> levels(static_cast<size_t>(n));
    levels[0].potential.push_back({radial, alpha, {}});
    levels[0].coupling = CouplingTerm{CouplingKind::InvRadialSq, {}};
    for (int i = 1; i < n; ++i) {
        levels[i].potential.push_back({PotentialKind::InvCosSq, beta[i - 1], k[i - 1]});
        if (i < n - 1)
            levels[i].coupling = CouplingTerm{CouplingKind::InvSinSq, k[i - 1]};
        else
            levels[i].potential.push_back({PotentialKind::InvSinSq, beta[i], k[i - 1]});
    }
    return levels;
}

}  // namespace

ChainSystem build_system(FamilyTag family, double alpha, const std::vector<double>& beta,
                         const std::vector<RationalParam>& k, double eps_dom) {
    int n = 0;
    PotentialKind radial = PotentialKind::HarmonicRadial;
    switch (family) {
        case FamilyTag::Oscillator3D: n = 3; break;
        case FamilyTag::KeplerCoulomb3D: n = 3; radial = PotentialKind::KeplerRadial; break;
        case FamilyTag::FourDExample: n = 4; break;
        case FamilyTag::Custom: throw ConfigError("use build_custom for custom chains");
    }
    if (static_cast<int>(beta.size()) != n)
        throw ConfigError(family_name(family) + " expects " + std::to_string(n) + " beta coefficients, got " +
                          std::to_string(beta.size()));
    if (static_cast<int>(k.size()) != n - 1)
        throw ConfigError(family_name(family) + " expects " + std::to_string(n - 1) + " rational parameters, got " +
                          std::to_string(k.size()));
    for (const auto& ki : k) ki.validate();
    if (!(eps_dom > 0)) throw ConfigError("eps_dom must be positive");

    ChainSystem sys;
    sys.n = n;
    sys.family = family;
    sys.alpha = alpha;
    sys.beta = beta;
    sys.k = k;
    sys.eps_dom = eps_dom;
    sys.levels = standard_chain(n, radial, alpha, beta, k);
    drop_zero_terms(sys.levels);
    validate_levels(sys.levels, kMaxDimension);
    return sys;
}

ChainSystem build_custom(std::vector<Level> levels, double eps_dom, int max_dimension) {
    if (!(eps_dom > 0)) throw ConfigError("eps_dom must be positive");
    drop_zero_terms(levels);
    validate_levels(levels, max_dimension);
    ChainSystem sys;
    sys.n = static_cast<int>(levels.size());
    sys.family = FamilyTag::Custom;
    sys.levels = std::move(levels);
    sys.eps_dom = eps_dom;
    return sys;
}

std::string family_name(FamilyTag tag) {
    switch (tag) {
        case FamilyTag::Oscillator3D: return "oscillator3d";
        case FamilyTag::KeplerCoulomb3D: return "keplercoulomb3d";
        case FamilyTag::FourDExample: return "fourd";
        case FamilyTag::Custom: return "custom";
    }
    return "?";
}

FamilyTag family_from_name(const std::string& name) {
    if (name == "oscillator3d") return FamilyTag::Oscillator3D;
    if (name == "keplercoulomb3d") return FamilyTag::KeplerCoulomb3D;
    if (name == "fourd") return FamilyTag::FourDExample;
    if (name == "custom") return FamilyTag::Custom;
    throw ConfigError("unknown family '" + name + "'");
}

ChainValues eval_chain(const ChainSystem& sys, const PhasePoint& x) {
    if (static_cast<int>(x.q.size()) != sys.n || static_cast<int>(x.p.size()) != sys.n)
        throw ConfigError("phase point arity mismatch");
    return ChainValues{eval_chain_values<double>(sys, x.q, x.p)};
}

bool in_domain(const ChainSystem& sys, const PhasePoint& x) {
    try {
        eval_chain(sys, x);
        return true;
    } catch (const DomainViolation&) {
        return false;
    }
}

std::vector<double> flow_field(const ChainSystem& sys, const PhasePoint& x) {
    const int n = sys.n;
    eval_chain(sys, x);  // arity + domain check
    std::vector<double> out(static_cast<size_t>(2 * n));
    std::vector<Dual<double>> q(x.q.begin(), x.q.end()), p(x.p.begin(), x.p.end());
    for (int i = 0; i < n; ++i) {
        p[i].d = 1.0;
        out[i] = eval_hamiltonian<Dual<double>>(sys, q, p).d;  // qdot_i = dH/dp_i
        p[i].d = 0.0;
        q[i].d = 1.0;
        out[n + i] = -eval_hamiltonian<Dual<double>>(sys, q, p).d;  // pdot_i = -dH/dq_i
        q[i].d = 0.0;
    }
    return out;
}

std::vector<double> inverse_metric(const ChainSystem& sys, const std::vector<double>& q) {
    if (static_cast<int>(q.size()) != sys.n) throw ConfigError("coordinate arity mismatch");
    return inverse_metric_diag<double>(sys, q);
}

}  // namespace sepchain
