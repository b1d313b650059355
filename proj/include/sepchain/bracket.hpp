#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sepchain/system.hpp"

namespace sepchain {

using D1 = Dual<cplx>;
using D2 = Dual<D1>;

template <class S>
struct PhasePointT {
    std::vector<S> q;
    std::vector<S> p;
};

// A scalar phase-space function evaluable with plain complex scalars and with
// one or two levels of dual nesting (first derivatives of brackets need the
// second level).
class Observable {
  public:
    template <class F>
    Observable(std::string label, F f)
        : label_(std::move(label)),
          f0_([f](const PhasePointT<cplx>& x) { return f(x); }),
          f1_([f](const PhasePointT<D1>& x) { return f(x); }),
          f2_([f](const PhasePointT<D2>& x) { return f(x); }) {}

    const std::string& label() const { return label_; }

    // for derived observables (e.g. brackets) that stop at one dual level
    static Observable from_functions(std::string label, std::function<cplx(const PhasePointT<cplx>&)> f0,
                                     std::function<D1(const PhasePointT<D1>&)> f1) {
        Observable o;
        o.label_ = std::move(label);
        o.f0_ = std::move(f0);
        o.f1_ = std::move(f1);
        return o;
    }

    cplx operator()(const PhasePointT<cplx>& x) const { return f0_(x); }
    D1 operator()(const PhasePointT<D1>& x) const { return f1_(x); }
    D2 operator()(const PhasePointT<D2>& x) const {
        if (!f2_) throw std::logic_error("observable '" + label_ + "' does not support nested derivatives");
        return f2_(x);
    }

    cplx operator()(const PhasePoint& x) const {
        return f0_({std::vector<cplx>(x.q.begin(), x.q.end()), std::vector<cplx>(x.p.begin(), x.p.end())});
    }

  private:
    Observable() = default;

    std::string label_;
    std::function<cplx(const PhasePointT<cplx>&)> f0_;
    std::function<D1(const PhasePointT<D1>&)> f1_;
    std::function<D2(const PhasePointT<D2>&)> f2_;
};

// L_i as an observable; index is 1-based (L_1 = H)
Observable observable_L(const ChainSystem& sys, int index);
Observable observable_H(const ChainSystem& sys);
// a single momentum or coordinate
Observable observable_p(int slot, int n);
Observable observable_q(int slot, int n);

namespace detail {

template <class S>
PhasePointT<Dual<S>> lift(const PhasePointT<S>& x) {
    PhasePointT<Dual<S>> y;
    y.q.assign(x.q.begin(), x.q.end());
    y.p.assign(x.p.begin(), x.p.end());
    return y;
}

}  // namespace detail

// gradient (df/dq_1..n, df/dp_1..n) by one dual evaluation per slot
template <class S>
std::vector<S> gradient_t(const Observable& f, const PhasePointT<S>& x) {
    const size_t n = x.q.size();
    auto y = detail::lift(x);
    std::vector<S> g(2 * n);
    for (size_t i = 0; i < n; ++i) {
        y.q[i].d = S(1.0);
        g[i] = f(y).d;
        y.q[i].d = S(0.0);
        y.p[i].d = S(1.0);
        g[n + i] = f(y).d;
        y.p[i].d = S(0.0);
    }
    return g;
}

std::vector<cplx> gradient(const Observable& f, const PhasePoint& x);

// sign convention: {F,G} = sum_i dF/dp_i dG/dq_i - dF/dq_i dG/dp_i
template <class S>
S poisson_bracket_t(const Observable& f, const Observable& g, const PhasePointT<S>& x) {
    auto gf = gradient_t(f, x);
    auto gg = gradient_t(g, x);
    const size_t n = x.q.size();
    S acc(0.0);
    for (size_t i = 0; i < n; ++i) acc = acc + gf[n + i] * gg[i] - gf[i] * gg[n + i];
    return acc;
}

cplx poisson_bracket(const Observable& f, const Observable& g, const PhasePoint& x);

// {f,g} as an observable (evaluable with one dual level, e.g. for Jacobi)
Observable bracket_observable(const Observable& f, const Observable& g);

// |{f,g}| normalized by the product of gradient norms (scale-free residual)
double normalized_bracket(const Observable& f, const Observable& g, const PhasePoint& x);

// n x n worst-case normalized |{L_i, L_j}| over the given points
std::vector<std::vector<double>> involution_matrix(const ChainSystem& sys,
                                                   const std::vector<PhasePoint>& points);

struct RankReport {
    int rank = 0;
    std::vector<double> singular_values;  // at the maximizing point
    int best_point = -1;
};

// numeric functional-independence test: rank of the stacked gradient matrix,
// maximized over points; rank = #(sigma > tol * sigma_max)
RankReport independence_rank(const std::vector<Observable>& fs, const std::vector<PhasePoint>& points,
                             double tol = 1e-8);

}  // namespace sepchain
