#include "sepchain/bracket.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace sepchain {

Observable observable_L(const ChainSystem& sys, int index) {
    if (index < 1 || index > sys.n) throw ConfigError("chain index out of range");
    return Observable("L" + std::to_string(index), [sys, index](const auto& x) {
        using S = std::decay_t<decltype(x.q[0])>;
        return eval_chain_values<S>(sys, x.q, x.p)[static_cast<size_t>(index - 1)];
    });
}

Observable observable_H(const ChainSystem& sys) {
    return Observable("H", [sys](const auto& x) {
        using S = std::decay_t<decltype(x.q[0])>;
        return eval_hamiltonian<S>(sys, x.q, x.p);
    });
}

Observable observable_p(int slot, int n) {
    if (slot < 1 || slot > n) throw ConfigError("momentum slot out of range");
    return Observable("p" + std::to_string(slot),
                      [slot](const auto& x) { return x.p[static_cast<size_t>(slot - 1)]; });
}

Observable observable_q(int slot, int n) {
    if (slot < 1 || slot > n) throw ConfigError("coordinate slot out of range");
    return Observable("q" + std::to_string(slot),
                      [slot](const auto& x) { return x.q[static_cast<size_t>(slot - 1)]; });
}

namespace {
PhasePointT<cplx> to_cplx(const PhasePoint& x) {
    return {std::vector<cplx>(x.q.begin(), x.q.end()), std::vector<cplx>(x.p.begin(), x.p.end())};
}
}  // namespace

std::vector<cplx> gradient(const Observable& f, const PhasePoint& x) {
    auto g = gradient_t(f, to_cplx(x));
    for (const auto& gi : g)
        if (!std::isfinite(gi.real()) || !std::isfinite(gi.imag()))
            throw DomainViolation("non-finite gradient component of " + f.label());
    return g;
}

cplx poisson_bracket(const Observable& f, const Observable& g, const PhasePoint& x) {
    return poisson_bracket_t(f, g, to_cplx(x));
}

Observable bracket_observable(const Observable& f, const Observable& g) {
    std::string label = "{" + f.label() + "," + g.label() + "}";
    return Observable::from_functions(
        label, [f, g](const PhasePointT<cplx>& x) { return poisson_bracket_t(f, g, x); },
        [f, g](const PhasePointT<D1>& x) { return poisson_bracket_t(f, g, x); });
}

namespace {
double grad_norm(const std::vector<cplx>& g) {
    double s = 0;
    for (const auto& gi : g) s += std::norm(gi);
    return std::sqrt(s);
}
}  // namespace

double normalized_bracket(const Observable& f, const Observable& g, const PhasePoint& x) {
    auto xc = to_cplx(x);
    auto gf = gradient_t(f, xc);
    auto gg = gradient_t(g, xc);
    const size_t n = xc.q.size();
    cplx acc(0.0);
    for (size_t i = 0; i < n; ++i) acc += gf[n + i] * gg[i] - gf[i] * gg[n + i];
    double scale = grad_norm(gf) * grad_norm(gg);
    return std::abs(acc) / std::max(scale, 1e-300);
}

std::vector<std::vector<double>> involution_matrix(const ChainSystem& sys,
                                                   const std::vector<PhasePoint>& points) {
    if (points.empty()) throw ConfigError("involution_matrix needs at least one point");
    const int n = sys.n;
    std::vector<Observable> Ls;
    for (int i = 1; i <= n; ++i) Ls.push_back(observable_L(sys, i));
    std::vector<std::vector<double>> worst(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n), 0.0));
    for (const auto& x : points) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double v = normalized_bracket(Ls[i], Ls[j], x);
                worst[i][j] = std::max(worst[i][j], v);
            }
    }
    return worst;
}

RankReport independence_rank(const std::vector<Observable>& fs, const std::vector<PhasePoint>& points,
                             double tol) {
    if (points.empty()) throw ConfigError("independence_rank needs at least one point");
    if (!(tol > 0)) throw ConfigError("rank tolerance must be positive");
    RankReport best;
    for (size_t pi = 0; pi < points.size(); ++pi) {
        auto xc = to_cplx(points[pi]);
        const size_t cols = 2 * xc.q.size();
        Eigen::MatrixXcd m(fs.size(), cols);
        for (size_t r = 0; r < fs.size(); ++r) {
            auto g = gradient_t(fs[r], xc);
            // normalize each row so ill-scaled observables do not mask rank
            double nrm = grad_norm(g);
            if (nrm == 0) nrm = 1;
            for (size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = g[c] / nrm;
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
        auto sv = svd.singularValues();
        int rank = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > tol * sv(0)) ++rank;
        if (rank > best.rank) {
            best.rank = rank;
            best.singular_values.assign(sv.data(), sv.data() + sv.size());
            best.best_point = static_cast<int>(pi);
        }
    }
    return best;
}

}  // namespace sepchain
