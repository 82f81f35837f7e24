#pragma once

#include "separatrix/numeric_map.hpp"

#include <string>

namespace separatrix {

template <class S>
struct SaddleData {
    S eps;
    Vec2<S> point;
    S lambda;
    S log_lambda;
    Vec2<S> unstable;  // unit, positive x-component
    Vec2<S> stable;
    Mat2<S> jacobian;
    int newton_steps = 0;
};

/// Unit vector spanning ker(M - k I), oriented to positive x.
template <class S>
Vec2<S> eigenvector(const Mat2<S>& m, const S& k) {
    using std::abs;
    using std::sqrt;
    Vec2<S> u(m(0, 1), k - m(0, 0));
    Vec2<S> v(k - m(1, 1), m(1, 0));
    Vec2<S> w = abs(u(0)) + abs(u(1)) >= abs(v(0)) + abs(v(1)) ? u : v;
    w /= sqrt(w(0) * w(0) + w(1) * w(1));
    if (w(0) < 0) w = -w;
    return w;
}

/// Newton on F(p) = p seeded at (-sqrt(eps b / a), 0); `tol` is absolute in the step.
template <class S>
SaddleData<S> find_saddle(const NumericMap<S>& map, const S& eps, const S& a, const S& b, const S& tol) {
    using std::abs;
    using std::log;
    using std::sqrt;
    if (!(eps > 0)) throw ConvergenceError("find_saddle: eps must be positive");
    SaddleData<S> out;
    out.eps = eps;
    Vec2<S> p(-sqrt(eps * b / a), S(0));
    Mat2<S> id = Mat2<S>::Identity();
    bool done = false;
    for (int it = 0; it < 200 && !done; ++it) {
        Vec2<S> r = map(p) - p;
        Vec2<S> step = NumericMap<S>::solve2(map.jacobian(p) - id, r);
        p -= step;
        out.newton_steps = it + 1;
        done = abs(step(0)) + abs(step(1)) <= tol;
    }
    if (!done) throw ConvergenceError("find_saddle: Newton iteration diverged; eps may lie outside the basin");
    Vec2<S> r = map(p) - p;
    if (abs(r(0)) + abs(r(1)) > S(1000) * tol)
        throw ConvergenceError("find_saddle: fixed-point residual above tolerance");
    Mat2<S> j = map.jacobian(p);
    S tr = j.trace();
    S det = j.determinant();
    S disc = tr * tr - 4 * det;
    if (!(disc > 0) || !(tr > 0)) throw ConvergenceError("find_saddle: fixed point is not a hyperbolic saddle");
    S root = sqrt(disc);
    out.point = p;
    out.jacobian = j;
    out.lambda = (tr + root) / 2;
    out.log_lambda = log(out.lambda);
    if (!(out.lambda > 1)) throw ConvergenceError("find_saddle: no expanding multiplier");
    out.unstable = eigenvector(j, out.lambda);
    out.stable = eigenvector(j, det / out.lambda);
    return out;
}

}  // namespace separatrix
