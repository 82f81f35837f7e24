#pragma once

#include "separatrix/power_tables.hpp"
#include "separatrix/saddle.hpp"

#include <cmath>
#include <vector>

namespace separatrix {

enum class ManifoldKind { unstable, stable };

inline const char* kind_name(ManifoldKind k) { return k == ManifoldKind::unstable ? "unstable" : "stable"; }

/// Psi(kappa z) = F(Psi(z)) with kappa = lambda (unstable) or 1/lambda (stable).
/// psi^-(t) = Psi(e^t), psi^+(t) = Psi(e^-t).
template <class S>
struct ManifoldParametrization {
    ManifoldKind kind = ManifoldKind::unstable;
    NumericMap<S> map;
    Vec2<S> point;
    S lambda;
    S log_lambda;
    std::vector<Vec2<S>> c;  // c[0] = 0
    S s0;
    S r_v;
    int n_push = 4000;
    S tol;  // inner Newton tolerance for inverse map steps

    int order() const { return static_cast<int>(c.size()) - 1; }
    int sign() const { return kind == ManifoldKind::unstable ? 1 : -1; }
};

template <class S>
struct ManifoldPoint {
    Vec2<S> value;
    Vec2<S> derivative;
    int pushes = 0;
};

template <class S>
ManifoldParametrization<S> parametrize_manifold(const NumericMap<S>& map, const SaddleData<S>& saddle,
                                                ManifoldKind kind, const S& s0, int j_max, const S& tol) {
    using std::abs;
    using std::log;
    using std::pow;
    ManifoldParametrization<S> par;
    par.kind = kind;
    par.map = map;
    par.point = saddle.point;
    par.lambda = saddle.lambda;
    par.log_lambda = saddle.log_lambda;
    par.s0 = s0;
    par.tol = tol;
    S kappa = kind == ManifoldKind::unstable ? saddle.lambda : 1 / saddle.lambda;
    Vec2<S> v = kind == ManifoldKind::unstable ? saddle.unstable : saddle.stable;

    Poly2<S> f = map.f().shifted(saddle.point(0), saddle.point(1));
    Poly2<S> g = map.g().shifted(saddle.point(0), saddle.point(1));
    PowerTables<S> tab(std::max(f.degree_x(), g.degree_x()), std::max(f.degree_y(), g.degree_y()));
    const Mat2<S>& df = saddle.jacobian;

    par.c.assign(1, Vec2<S>(S(0), S(0)));
    tab.push(S(0), S(0));
    par.c.push_back(s0 * v);
    tab.push(par.c[1](0), par.c[1](1));
    S kj = kappa;
    for (int j = 2; j <= j_max; ++j) {
        kj *= kappa;
        tab.push(S(0), S(0));
        Vec2<S> rhs(tab.coefficient(f, j, 2), tab.coefficient(g, j, 2));
        Mat2<S> m = kj * Mat2<S>::Identity() - df;
        Vec2<S> cj = NumericMap<S>::solve2(m, rhs);
        par.c.push_back(cj);
        tab.set_linear(j, cj(0), cj(1));
    }

    // Validity radius: the last quarter of coefficients times r_v^j stays below tol.
    S r = -1;
    for (int j = std::max(2, 3 * j_max / 4); j <= j_max; ++j) {
        S m = abs(par.c[j](0)) + abs(par.c[j](1));
        if (m == 0) continue;
        S cand = pow(tol / m, S(1) / S(j));
        if (r < 0 || cand < r) r = cand;
    }
    par.r_v = r < 0 ? S(1) : r / 2;
    return par;
}

/// Psi(z) and z Psi'(z).
template <class S>
std::pair<Vec2<S>, Vec2<S>> evaluate_series(const ManifoldParametrization<S>& par, const S& z) {
    Vec2<S> val(S(0), S(0)), der(S(0), S(0));
    for (int j = par.order(); j >= 1; --j) {
        val = (val + par.c[j]) * z;
        der = der * z + S(j) * par.c[j];
    }
    der *= z;
    return {par.point + val, der};
}

/// psi(t) and psi'(t) by pushing the series value through N map steps; `extra` forces more steps.
template <class S>
ManifoldPoint<S> evaluate_manifold(const ManifoldParametrization<S>& par, const S& t, int extra = 0) {
    using std::ceil;
    using std::exp;
    using std::log;
    S u = S(par.sign()) * t;
    S over = (u - log(par.r_v)) / par.log_lambda;
    int n = over > 0 ? static_cast<int>(ceil(to_double(over))) : 0;
    n += extra;
    if (n > par.n_push) throw ConvergenceError("evaluate_manifold: t lies beyond the pushforward budget");
    S z = exp(u - S(n) * par.log_lambda);
    auto [q, dq] = evaluate_series(par, z);
    if (par.kind == ManifoldKind::unstable) {
        for (int k = 0; k < n; ++k) {
            dq = par.map.jacobian(q) * dq;
            q = par.map(q);
        }
    } else {
        dq = -dq;
        for (int k = 0; k < n; ++k) {
            q = par.map.inverse(q, par.tol);
            dq = NumericMap<S>::solve2(par.map.jacobian(q), dq);
        }
    }
    using std::abs;
    if (!(abs(q(0)) + abs(q(1)) < S(1e6))) throw ConvergenceError("evaluate_manifold: orbit left the domain");
    return {q, dq, n};
}

/// |psi(t +- log lambda) - F^{+-1}(psi(t))|, the conjugacy defect along the orbit.
template <class S>
S conjugacy_residual(const ManifoldParametrization<S>& par, const S& t) {
    using std::abs;
    Vec2<S> p = evaluate_manifold(par, t).value;
    Vec2<S> image;
    Vec2<S> shifted;
    if (par.kind == ManifoldKind::unstable) {
        image = par.map(p);
        shifted = evaluate_manifold(par, t + par.log_lambda).value;
    } else {
        image = par.map.inverse(p, par.tol);
        shifted = evaluate_manifold(par, t - par.log_lambda).value;
    }
    Vec2<S> d = image - shifted;
    return abs(d(0)) + abs(d(1));
}

}  // namespace separatrix
