#pragma once

#include "separatrix/manifold.hpp"

#include <boost/math/special_functions/legendre.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <optional>
#include <vector>

namespace separatrix {

template <class S>
S cross(const Vec2<S>& a, const Vec2<S>& b) {
    return a(0) * b(1) - a(1) * b(0);
}

template <class S>
struct HomoclinicPoint {
    S t1;  // stable parameter
    S t2;  // unstable parameter
    Vec2<S> point;
    Vec2<S> tangent_unstable;
    Vec2<S> tangent_stable;
    S residual;
    S omega;
};

enum class SeedMode { generic, reversor };

template <class S>
struct HomoclinicOptions {
    int samples = 8;
    SeedMode mode = SeedMode::generic;
    std::optional<Mat2<S>> reversor;
    int newton_iterations = 60;
};

/// omega = det[psi-dot^-(t2) | psi-dot^+(t1)].
template <class S>
S homoclinic_invariant(const Vec2<S>& unstable_tangent, const Vec2<S>& stable_tangent) {
    return cross(unstable_tangent, stable_tangent);
}

namespace detail {

/// Solves <psi^+(t1) - psi^-(t2), psi-dot^-(t2)> = 0 for t1, starting at t1.
template <class S>
S tangential_match(const ManifoldParametrization<S>& st, const ManifoldPoint<S>& u, S t1, const S& tol) {
    using std::abs;
    for (int it = 0; it < 60; ++it) {
        auto s = evaluate_manifold(st, t1);
        S phi = (s.value - u.value).dot(u.derivative);
        S dphi = s.derivative.dot(u.derivative);
        S step = phi / dphi;
        t1 -= step;
        if (abs(step) <= tol) return t1;
    }
    throw ConvergenceError("tangential matching did not converge");
}

template <class S>
std::vector<S> legendre_rule(int n, std::vector<S>& weights) {
    std::vector<S> z = boost::math::legendre_p_zeros<S>(n);
    std::vector<S> nodes;
    weights.clear();
    for (const auto& x : z) {
        S d = boost::math::legendre_p_prime<S>(n, x);
        S w = 2 / ((1 - x * x) * d * d);
        nodes.push_back(x);
        weights.push_back(w);
        if (x != 0) {
            nodes.push_back(-x);
            weights.push_back(w);
        }
    }
    return nodes;
}

}  // namespace detail

/// 2D Newton on psi^+(t1) = psi^-(t2).
template <class S>
HomoclinicPoint<S> polish_homoclinic(const ManifoldParametrization<S>& un, const ManifoldParametrization<S>& st, S t1,
                                     S t2, const S& target, int iterations = 60) {
    using std::abs;
    for (int it = 0; it <= iterations; ++it) {
        auto u = evaluate_manifold(un, t2);
        auto s = evaluate_manifold(st, t1);
        Vec2<S> r = s.value - u.value;
        S res = abs(r(0)) + abs(r(1));
        if (res < target) {
            HomoclinicPoint<S> h{t1, t2, u.value, u.derivative, s.derivative, res, S(0)};
            h.omega = homoclinic_invariant(u.derivative, s.derivative);
            return h;
        }
        Mat2<S> j;
        j << s.derivative(0), -u.derivative(0), s.derivative(1), -u.derivative(1);
        Vec2<S> step = NumericMap<S>::solve2(j, r);
        t1 -= step(0);
        t2 -= step(1);
    }
    throw ConvergenceError("homoclinic Newton iteration stagnated");
}

/// Primary homoclinic points with t2 in [center - L/2, center + L/2), L = log lambda.
/// `match` maps an unstable time to an initial stable time.
template <class S, class Match>
std::vector<HomoclinicPoint<S>> find_homoclinics(const ManifoldParametrization<S>& un,
                                                 const ManifoldParametrization<S>& st, const S& center, Match match,
                                                 const S& target, const HomoclinicOptions<S>& opt = {}) {
    using std::abs;
    const S L = un.log_lambda;
    const S tol = un.tol;
    S last_t1 = match(center);
    Vec2<S> fix_dir(S(0), S(0));
    if (opt.mode == SeedMode::reversor) {
        if (!opt.reversor) throw ConvergenceError("reversor seeding requested without a reversor");
        const Mat2<S>& R = *opt.reversor;
        Vec2<S> a(R(0, 1), 1 - R(0, 0)), b(1 - R(1, 1), R(1, 0));
        using std::abs;
        fix_dir = abs(a(0)) + abs(a(1)) >= abs(b(0)) + abs(b(1)) ? a : b;
    }
    auto gap = [&](const S& t2) {
        auto u = evaluate_manifold(un, t2);
        if (opt.mode == SeedMode::reversor) {
            // p in Fix(R), or (p + F(p)) / 2 in Fix(R) when p in Fix(R F)
            Vec2<S> mid = (u.value + un.map(u.value)) / 2;
            return std::pair<S, S>(cross(fix_dir, u.value), cross(fix_dir, mid));
        }
        last_t1 = detail::tangential_match(st, u, last_t1, tol);
        auto s = evaluate_manifold(st, last_t1);
        S g = cross<S>(u.derivative, s.value - u.value);
        return std::pair<S, S>(g, g);
    };

    // symmetric points of an orbit need not fall in the window itself, so search three periods
    int periods = opt.mode == SeedMode::reversor ? 3 : 1;
    int n = std::max(4, opt.samples) * periods;
    std::vector<S> ts;
    std::vector<std::pair<S, S>> gs;
    for (int k = 0; k <= n; ++k) {
        ts.push_back(center - S(periods) * L / 2 + S(periods) * L * S(k) / S(n));
        last_t1 = match(ts.back());
        gs.push_back(gap(ts.back()));
    }
    int branches = opt.mode == SeedMode::reversor ? 2 : 1;
    std::vector<S> roots;
    for (int b = 0; b < branches; ++b) {
        for (int k = 0; k < n; ++k) {
            const S& ga = b == 0 ? gs[k].first : gs[k].second;
            const S& gb = b == 0 ? gs[k + 1].first : gs[k + 1].second;
            if (ga == 0) {
                roots.push_back(ts[k]);
                continue;
            }
            if ((ga < 0) == (gb < 0) || gb == 0) continue;
            auto f = [&](const S& t) {
                auto g = gap(t);
                return b == 0 ? g.first : g.second;
            };
            last_t1 = match(ts[k]);
            boost::uintmax_t iters = 200;
            int bits = static_cast<int>(std::numeric_limits<S>::digits) - 8;
            if constexpr (!std::is_same_v<S, double>) bits = static_cast<int>(S::default_precision() * 3.3219) - 8;
            auto r = boost::math::tools::toms748_solve(f, ts[k], ts[k + 1], ga, gb,
                                                       boost::math::tools::eps_tolerance<S>(bits), iters);
            roots.push_back((r.first + r.second) / 2);
        }
    }
    std::vector<HomoclinicPoint<S>> out;
    for (const auto& t2 : roots) {
        auto u = evaluate_manifold(un, t2);
        S t1 = detail::tangential_match(st, u, match(t2), tol);
        auto h = polish_homoclinic(un, st, t1, t2, target, opt.newton_iterations);
        using std::floor;
        S k = floor((h.t2 - center + L / 2) / L);
        if (k != 0) {
            // same orbit, parameters moved by whole periods back into the window
            h = polish_homoclinic(un, st, h.t1 - k * L, h.t2 - k * L, target, opt.newton_iterations);
        }
        bool dup = false;
        for (const auto& o : out) {
            S d = (h.t2 - o.t2) / L;
            using std::round;
            if (abs(d - round(d)) < S(1) / 1000) dup = true;
        }
        if (!dup) out.push_back(h);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.t2 < b.t2; });
    return out;
}

/// Oriented area of the lobe between consecutive homoclinic points a and b:
/// integral of y dx along the unstable segment minus the stable one.
template <class S>
S lobe_area(const ManifoldParametrization<S>& un, const ManifoldParametrization<S>& st, const HomoclinicPoint<S>& a,
            const HomoclinicPoint<S>& b, int nodes = 64) {
    std::vector<S> w;
    std::vector<S> x = detail::legendre_rule<S>(nodes, w);
    auto segment = [&](const ManifoldParametrization<S>& par, const S& lo, const S& hi) {
        S half = (hi - lo) / 2, mid = (hi + lo) / 2, sum(0);
        for (std::size_t i = 0; i < x.size(); ++i) {
            auto p = evaluate_manifold(par, mid + half * x[i]);
            sum += w[i] * p.value(1) * p.derivative(0);
        }
        return sum * half;
    };
    return segment(un, a.t2, b.t2) - segment(st, a.t1, b.t1);
}

}  // namespace separatrix
