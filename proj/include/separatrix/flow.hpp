#pragma once

#include "separatrix/interpolator.hpp"
#include "separatrix/power_tables.hpp"
#include "separatrix/saddle.hpp"

#include <vector>

namespace separatrix {

/// Polynomial Hamiltonian vector field X' = H_Y, Y' = -H_X, optionally multiplied by `scale`.
template <class S>
struct PolynomialFlow {
    Poly2<S> H;
    Poly2<S> vx;
    Poly2<S> vy;

    explicit PolynomialFlow(Poly2<S> h, const S& scale = S(1)) : H(std::move(h)) {
        for (const auto& t : H.terms) {
            if (t.j) vx.add(t.i, t.j - 1, scale * t.c * S(t.j));
            if (t.i) vy.add(t.i - 1, t.j, -scale * t.c * S(t.i));
        }
    }

    Vec2<S> operator()(const Vec2<S>& p) const { return Vec2<S>(vx(p(0), p(1)), vy(p(0), p(1))); }
    Mat2<S> jacobian(const Vec2<S>& p) const {
        Vec2<S> gx = vx.gradient(p(0), p(1)), gy = vy.gradient(p(0), p(1));
        Mat2<S> m;
        m << gx(0), gx(1), gy(0), gy(1);
        return m;
    }
    S energy(const Vec2<S>& p) const { return H(p(0), p(1)); }
};

/// H^n_delta = sum_k delta^k h_{5+k}(X, Y, 1) as a numeric polynomial.
template <class S>
Poly2<S> scaled_polynomial(const ScaledHamiltonian& sh, const S& delta) {
    Poly2<S> p;
    S w = delta;
    for (const auto& part : sh.parts) {
        for (const auto& [e, c] : part) p.add(e.first, e.second, to_scalar<S>(c) * w);
        w *= delta;
    }
    return p;
}

/// Standard scaling x = delta^2 X, y = delta^3 Y, eps = delta^4 of the family.
template <class S>
NumericMap<S> scaled_map(const MapFamily& m, const S& delta) {
    Poly2<S> f, g;
    for (const auto& [ord, poly] : m.f.parts())
        for (const auto& [t, c] : poly.terms()) f.add(t.k, t.l, to_scalar<S>(c) * Poly2<S>::ipow(delta, ord - 2));
    for (const auto& [ord, poly] : m.g.parts())
        for (const auto& [t, c] : poly.terms()) g.add(t.k, t.l, to_scalar<S>(c) * Poly2<S>::ipow(delta, ord - 3));
    // X1 = X + delta Y + ..., so fold the linear shear into f
    f.add(0, 1, delta - 1);
    return NumericMap<S>(f, g);
}

/// Taylor coefficients of the solution through `order` at p.
template <class S>
std::vector<Vec2<S>> taylor_coefficients(const PolynomialFlow<S>& flow, const Vec2<S>& p, int order) {
    PowerTables<S> tab(std::max(flow.vx.degree_x(), flow.vy.degree_x()), std::max(flow.vx.degree_y(), flow.vy.degree_y()));
    std::vector<Vec2<S>> c{p};
    for (int j = 0; j < order; ++j) {
        tab.push(c[j](0), c[j](1));
        S d(j + 1);
        c.emplace_back(tab.coefficient(flow.vx, j) / d, tab.coefficient(flow.vy, j) / d);
    }
    return c;
}

/// Integrates from p over time T with adaptive Taylor steps.
template <class S>
Vec2<S> taylor_flow(const PolynomialFlow<S>& flow, Vec2<S> p, const S& T, int order, const S& tol) {
    using std::abs;
    using std::pow;
    S done(0);
    S dir = T < 0 ? S(-1) : S(1);
    S remaining = abs(T);
    int steps = 0;
    while (remaining > 0) {
        auto c = taylor_coefficients(flow, p, order);
        S h = -1;
        for (int j : {order - 1, order}) {
            S m = abs(c[j](0)) + abs(c[j](1));
            if (m == 0) continue;
            S cand = pow(tol / m, S(1) / S(j)) / 2;
            if (h < 0 || cand < h) h = cand;
        }
        if (h < 0 || h > remaining) h = remaining;
        S s = dir * h;
        Vec2<S> q(S(0), S(0));
        for (int j = order; j >= 0; --j) q = q * s + c[j];
        p = q;
        remaining -= h;
        if (++steps > 100000) throw ConvergenceError("taylor_flow: step budget exhausted");
        using std::isfinite;
        if (!(abs(p(0)) + abs(p(1)) < S(1e6))) throw ConvergenceError("taylor_flow: orbit left the domain");
    }
    return p;
}

/// Separatrix of a polynomial Hamiltonian flow in time rescaled to unit Lyapunov exponent:
/// phi(s) = Psi(e^s) near the saddle, then Taylor integration.
template <class S>
class FlowSeparatrix {
public:
    FlowSeparatrix(const Poly2<S>& H, const Vec2<S>& seed, const S& phase_scale, int j_max, int taylor_order,
                   const S& tol)
        : base_(H), order_(taylor_order), tol_(tol) {
        using std::abs;
        using std::pow;
        using std::sqrt;
        Vec2<S> p = seed;
        bool ok = false;
        for (int it = 0; it < 200 && !ok; ++it) {
            Vec2<S> step = NumericMap<S>::solve2(base_.jacobian(p), base_(p));
            p -= step;
            ok = abs(step(0)) + abs(step(1)) <= tol;
        }
        if (!ok) throw ConvergenceError("flow saddle Newton did not converge");
        saddle_ = p;
        Mat2<S> dv = base_.jacobian(p);
        S disc = dv.trace() * dv.trace() / 4 - dv.determinant();
        if (!(disc > 0)) throw ConvergenceError("flow equilibrium is not a saddle");
        mu_ = dv.trace() / 2 + sqrt(disc);
        flow_ = PolynomialFlow<S>(H, 1 / mu_);
        Vec2<S> v = eigenvector(dv, mu_);
        v *= phase_scale / v(0);

        Poly2<S> fx = flow_.vx.shifted(p(0), p(1)), fy = flow_.vy.shifted(p(0), p(1));
        Mat2<S> a = dv / mu_;
        PowerTables<S> tab(std::max(fx.degree_x(), fy.degree_x()), std::max(fx.degree_y(), fy.degree_y()));
        c_.assign(1, Vec2<S>(S(0), S(0)));
        tab.push(S(0), S(0));
        c_.push_back(v);
        tab.push(v(0), v(1));
        for (int j = 2; j <= j_max; ++j) {
            tab.push(S(0), S(0));
            Vec2<S> rhs(tab.coefficient(fx, j, 2), tab.coefficient(fy, j, 2));
            Vec2<S> cj = NumericMap<S>::solve2(S(j) * Mat2<S>::Identity() - a, rhs);
            c_.push_back(cj);
            tab.set_linear(j, cj(0), cj(1));
        }
        S r = -1;
        for (int j = std::max(2, 3 * j_max / 4); j <= j_max; ++j) {
            S m = abs(c_[j](0)) + abs(c_[j](1));
            if (m == 0) continue;
            S cand = pow(tol / m, S(1) / S(j));
            if (r < 0 || cand < r) r = cand;
        }
        r_v_ = r < 0 ? S(1) : r / 2;
    }

    const Vec2<S>& saddle() const { return saddle_; }
    const S& exponent() const { return mu_; }
    const PolynomialFlow<S>& flow() const { return flow_; }

    Vec2<S> operator()(const S& s) const {
        using std::exp;
        using std::log;
        S s_max = log(r_v_);
        S start = s < s_max ? s : s_max;
        S z = exp(start);
        Vec2<S> v(S(0), S(0));
        for (int j = static_cast<int>(c_.size()) - 1; j >= 1; --j) v = (v + c_[j]) * z;
        v += saddle_;
        if (s > start) v = taylor_flow(flow_, v, s - start, order_, tol_);
        return v;
    }

private:
    PolynomialFlow<S> base_;
    PolynomialFlow<S> flow_{Poly2<S>{}};
    std::vector<Vec2<S>> c_;
    Vec2<S> saddle_;
    S mu_;
    S r_v_;
    int order_;
    S tol_;
};

template <class S>
struct ExtensionResult {
    int steps = 0;
    S deviation;
    S k_hat;
};

/// Iterates both maps floor(T / delta) times and reports sup |z~_k - z_k| and sup / delta^n.
template <class S, class MapA, class MapB>
ExtensionResult<S> extension_experiment(const MapA& F, const MapB& G, Vec2<S> z, Vec2<S> zt, const S& delta, int n,
                                        const S& T) {
    using std::abs;
    using std::floor;
    ExtensionResult<S> out;
    out.steps = static_cast<int>(floor(to_double(T / delta)));
    auto dev = [](const Vec2<S>& a, const Vec2<S>& b) { return abs(a(0) - b(0)) + abs(a(1) - b(1)); };
    out.deviation = dev(z, zt);
    for (int k = 0; k < out.steps; ++k) {
        z = F(z);
        zt = G(zt);
        S d = dev(z, zt);
        if (d > out.deviation) out.deviation = d;
        if (!(abs(z(0)) + abs(z(1)) < S(1e6))) throw ConvergenceError("extension_experiment: orbit escaped");
    }
    out.k_hat = out.deviation / Poly2<S>::ipow(delta, n);
    return out;
}

}  // namespace separatrix
