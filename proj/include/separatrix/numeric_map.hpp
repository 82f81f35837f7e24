#pragma once

#include "separatrix/map_family.hpp"
#include "separatrix/real.hpp"

#include <vector>

namespace separatrix {

/// Numeric polynomial in two variables.
template <class S>
struct Poly2 {
    struct Term {
        int i;
        int j;
        S c;
    };
    std::vector<Term> terms;

    int degree_x() const {
        int d = 0;
        for (const auto& t : terms) d = std::max(d, t.i);
        return d;
    }
    int degree_y() const {
        int d = 0;
        for (const auto& t : terms) d = std::max(d, t.j);
        return d;
    }

    void add(int i, int j, const S& c) {
        for (auto& t : terms)
            if (t.i == i && t.j == j) {
                t.c += c;
                return;
            }
        terms.push_back({i, j, c});
    }

    S operator()(const S& x, const S& y) const {
        S out(0);
        for (const auto& t : terms) out += t.c * ipow(x, t.i) * ipow(y, t.j);
        return out;
    }

    Vec2<S> gradient(const S& x, const S& y) const {
        Vec2<S> g(S(0), S(0));
        for (const auto& t : terms) {
            if (t.i) g(0) += t.c * S(t.i) * ipow(x, t.i - 1) * ipow(y, t.j);
            if (t.j) g(1) += t.c * S(t.j) * ipow(x, t.i) * ipow(y, t.j - 1);
        }
        return g;
    }

    Mat2<S> hessian(const S& x, const S& y) const {
        Mat2<S> h;
        h.setZero();
        for (const auto& t : terms) {
            if (t.i > 1) h(0, 0) += t.c * S(t.i * (t.i - 1)) * ipow(x, t.i - 2) * ipow(y, t.j);
            if (t.j > 1) h(1, 1) += t.c * S(t.j * (t.j - 1)) * ipow(x, t.i) * ipow(y, t.j - 2);
            if (t.i && t.j) h(0, 1) += t.c * S(t.i * t.j) * ipow(x, t.i - 1) * ipow(y, t.j - 1);
        }
        h(1, 0) = h(0, 1);
        return h;
    }

    /// Same polynomial written in (X, Y) = (x - px, y - py).
    Poly2 shifted(const S& px, const S& py) const {
        Poly2 out;
        for (const auto& t : terms)
            for (int a = 0; a <= t.i; ++a)
                for (int b = 0; b <= t.j; ++b)
                    out.add(a, b, t.c * S(binom(t.i, a) * binom(t.j, b)) * ipow(px, t.i - a) * ipow(py, t.j - b));
        return out;
    }

    static long binom(int n, int k) {
        long r = 1;
        for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    }

    static S ipow(const S& v, int n) {
        S out(1);
        for (int k = 0; k < n; ++k) out *= v;
        return out;
    }
};

/// Series in (x, y, eps) evaluated at a fixed eps.
template <class S>
Poly2<S> poly_at_eps(const QhSeries& s, const S& eps) {
    Poly2<S> p;
    for (const auto& [ord, poly] : s.parts())
        for (const auto& [t, c] : poly.terms()) p.add(t.k, t.l, to_scalar<S>(c) * Poly2<S>::ipow(eps, t.m));
    return p;
}

/// x1 = x + y + f(x, y), y1 = y + g(x, y) at fixed eps.
template <class S>
class NumericMap {
public:
    NumericMap() = default;
    NumericMap(const MapFamily& m, const S& eps) : f_(poly_at_eps<S>(m.f, eps)), g_(poly_at_eps<S>(m.g, eps)) {}
    NumericMap(Poly2<S> f, Poly2<S> g) : f_(std::move(f)), g_(std::move(g)) {}

    const Poly2<S>& f() const { return f_; }
    const Poly2<S>& g() const { return g_; }

    Vec2<S> operator()(const Vec2<S>& p) const {
        return Vec2<S>(p(0) + p(1) + f_(p(0), p(1)), p(1) + g_(p(0), p(1)));
    }

    Mat2<S> jacobian(const Vec2<S>& p) const {
        Vec2<S> gf = f_.gradient(p(0), p(1));
        Vec2<S> gg = g_.gradient(p(0), p(1));
        Mat2<S> j;
        j << S(1) + gf(0), S(1) + gf(1), gg(0), S(1) + gg(1);
        return j;
    }

    /// Newton solve of F(q) = p seeded at the linear inverse.
    Vec2<S> inverse(const Vec2<S>& p, const S& tol) const {
        Vec2<S> q(p(0) - p(1), p(1));
        for (int it = 0; it < 100; ++it) {
            Vec2<S> r = (*this)(q) - p;
            Mat2<S> j = jacobian(q);
            Vec2<S> step = solve2(j, r);
            q -= step;
            using std::abs;
            if (abs(step(0)) + abs(step(1)) <= tol * (S(1) + abs(q(0)) + abs(q(1)))) return q;
        }
        throw ConvergenceError("inverse map Newton iteration did not converge");
    }

    static Vec2<S> solve2(const Mat2<S>& m, const Vec2<S>& r) {
        S det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        return Vec2<S>((m(1, 1) * r(0) - m(0, 1) * r(1)) / det, (m(0, 0) * r(1) - m(1, 0) * r(0)) / det);
    }

private:
    Poly2<S> f_;
    Poly2<S> g_;
};

}  // namespace separatrix
