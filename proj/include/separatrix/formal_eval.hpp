#pragma once

#include "separatrix/formal_separatrix.hpp"
#include "separatrix/real.hpp"

#include <vector>

namespace separatrix {

/// Numeric partial sum of a formal separatrix at fixed delta. Components keep the
/// delta-orders up to x_order and y_order (A_j counts as 2j, mu B_j as 2j + 1).
template <class S>
class FormalEvaluator {
public:
    FormalEvaluator(const FormalSeparatrix& sep, const S& delta, int x_order, int y_order) {
        using std::sqrt;
        S d2 = delta * delta;
        S beta(0), pw = d2;
        for (std::size_t k = 1; k < sep.beta.size(); ++k, pw *= d2) beta += to_scalar<S>(sep.beta[k]) * pw;
        mu_ = sqrt(2 * beta);
        collect(sep.x, d2, x_order, px_, qx_);
        collect(sep.y, d2, y_order, py_, qy_);
    }

    const S& mu() const { return mu_; }

    /// Point and t-derivative.
    std::pair<Vec2<S>, Vec2<S>> operator()(const S& t) const {
        auto [e0, e1] = eta_values(t);
        S e1dot = e0 - S(3) / 2 * e0 * e0;
        S e1sq = e0 * e0 - e0 * e0 * e0;
        auto comp = [&](const std::vector<S>& p, const std::vector<S>& q, S& val, S& der) {
            S pv = horner(p, e0), pd = horner(deriv(p), e0);
            S qv = horner(q, e0), qd = horner(deriv(q), e0);
            val = pv + mu_ * e1 * qv;
            der = pd * e1 + mu_ * (e1dot * qv + e1sq * qd);
        };
        Vec2<S> v, d;
        comp(px_, qx_, v(0), d(0));
        comp(py_, qy_, v(1), d(1));
        return {v, d};
    }

    /// Limit point as t -> -inf or +inf.
    Vec2<S> limit() const { return Vec2<S>(at0(px_), at0(py_)); }

    /// Coefficient of e^{t} as t -> -inf (side = -1) or of e^{-t} as t -> +inf (side = +1).
    Vec2<S> tail(int side) const {
        S s(-side);
        return Vec2<S>(4 * (at1(px_) + s * mu_ * at0(qx_)), 4 * (at1(py_) + s * mu_ * at0(qy_)));
    }

private:
    static void collect(const MuSeries& m, const S& d2, int order, std::vector<S>& p, std::vector<S>& q) {
        S pw(1);
        for (std::size_t j = 0; j < m.A.size(); ++j, pw *= d2) {
            if (static_cast<int>(2 * j) <= order) add(p, m.A[j].P(), pw);
            if (j < m.B.size() && static_cast<int>(2 * j + 1) <= order) add(q, m.B[j].Q(), pw);
        }
    }
    static void add(std::vector<S>& dst, const EtaCoeffs& src, const S& w) {
        if (dst.size() < src.size()) dst.resize(src.size(), S(0));
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] += to_scalar<S>(src[i]) * w;
    }
    static S horner(const std::vector<S>& p, const S& x) {
        S r(0);
        for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * x + *it;
        return r;
    }
    static std::vector<S> deriv(const std::vector<S>& p) {
        std::vector<S> d;
        for (std::size_t i = 1; i < p.size(); ++i) d.push_back(S(static_cast<long>(i)) * p[i]);
        return d;
    }
    static S at0(const std::vector<S>& p) { return p.empty() ? S(0) : p[0]; }
    static S at1(const std::vector<S>& p) { return p.size() < 2 ? S(0) : p[1]; }

    S mu_;
    std::vector<S> px_, qx_, py_, qy_;
};

}  // namespace separatrix
