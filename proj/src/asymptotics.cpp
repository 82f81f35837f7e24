#include "separatrix/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace separatrix {

namespace {

using MatX = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using VecX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

struct RawFit {
    std::vector<Real> coefficients;
    Real residual_norm;
};

RawFit solve_fit(const std::vector<std::pair<Real, Real>>& pts, int K) {
    std::size_t n = pts.size();
    Real lo = pts[0].first * pts[0].first, hi = lo;
    for (const auto& [d, w] : pts) {
        Real v = d * d;
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    Real c = (lo + hi) / 2, s = (hi - lo) / 2;
    if (s == 0) throw FitError("fit needs distinct delta values");
    MatX A(n, K + 1);
    VecX b(n);
    for (std::size_t i = 0; i < n; ++i) {
        Real u = (pts[i].first * pts[i].first - c) / s, p = 1;
        for (int k = 0; k <= K; ++k, p *= u) A(i, k) = p;
        b(i) = pts[i].second;
    }
    Eigen::ColPivHouseholderQR<MatX> qr(A);
    Real dmax = abs(qr.matrixQR()(0, 0)), dmin = abs(qr.matrixQR()(K, K));
    if (dmin == 0 || dmax / dmin > Real(1e12)) throw FitError("ill-conditioned fit; widen the delta range");
    VecX u = qr.solve(b);
    Real res = sqrt((A * u - b).squaredNorm());
    // back to powers of v = delta^2: u = (v - c) / s
    std::vector<Real> a(K + 1, Real(0));
    for (int k = 0; k <= K; ++k) {
        // u_k ((v - c)/s)^k = u_k s^-k sum_i binom(k,i) v^i (-c)^{k-i}
        Real sk = pow(s, k);
        Real binom = 1;
        for (int i = 0; i <= k; ++i) {
            a[i] += u(k) / sk * binom * pow(-c, k - i);
            binom = binom * Real(k - i) / Real(i + 1);
        }
    }
    return {a, res};
}

}  // namespace

AsymptoticFit fit_even_series(const std::vector<std::pair<Real, Real>>& points, int K) {
    if (K < 0) throw FitError("fit degree must be nonnegative");
    if (static_cast<int>(points.size()) < K + 2)
        throw FitError("fit of degree " + std::to_string(K) + " needs at least " + std::to_string(K + 2) + " points");
    AsymptoticFit fit;
    fit.K = K;
    RawFit all = solve_fit(points, K);
    fit.coefficients = all.coefficients;
    fit.residual_norm = all.residual_norm;
    if (static_cast<int>(points.size()) >= K + 3) {
        for (std::size_t skip = 0; skip < points.size(); ++skip) {
            std::vector<std::pair<Real, Real>> sub;
            for (std::size_t i = 0; i < points.size(); ++i)
                if (i != skip) sub.push_back(points[i]);
            fit.a0_subgrids.push_back(solve_fit(sub, K).coefficients[0]);
        }
        auto [mn, mx] = std::minmax_element(fit.a0_subgrids.begin(), fit.a0_subgrids.end());
        fit.a0_spread = (*mx - *mn) / abs(fit.coefficients[0]);
    } else {
        fit.a0_spread = 0;
    }
    return fit;
}

RegressionResult order_regression(const std::vector<std::pair<double, double>>& pairs, double claimed, double floor) {
    RegressionResult r;
    r.claimed = claimed;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!(pairs[i].second > floor) || !(pairs[i].first > 0)) {
            r.excluded.push_back(i);
            continue;
        }
        xs.push_back(std::log(pairs[i].first));
        ys.push_back(std::log(pairs[i].second));
    }
    if (xs.size() < 2) throw FitError("order regression needs at least two usable points");
    double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i] / n, my += ys[i] / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) sxx += (xs[i] - mx) * (xs[i] - mx), sxy += (xs[i] - mx) * (ys[i] - my);
    if (sxx == 0) throw FitError("order regression needs distinct delta values");
    r.slope = sxy / sxx;
    double sse = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double e = ys[i] - my - r.slope * (xs[i] - mx);
        sse += e * e;
    }
    r.slope_error = xs.size() > 2 ? std::sqrt(sse / (n - 2) / sxx) : 0.0;
    r.pass = r.slope >= claimed - 0.25;
    return r;
}

std::vector<double> parse_grid(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("grid must look like kind:...");
    std::string kind = text.substr(0, colon), rest = text.substr(colon + 1);
    std::vector<double> out;
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("bad number in grid: " + s);
        return v;
    };
    if (kind == "list") {
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(number(item));
    } else if (kind == "geom" || kind == "lin") {
        std::stringstream ss(rest);
        std::string a, b, n;
        if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, n))
            throw std::invalid_argument("grid must be " + kind + ":lo:hi:count");
        double lo = number(a), hi = number(b);
        int count = static_cast<int>(number(n));
        if (count < 2 || !(lo > 0) || !(hi > lo)) throw std::invalid_argument("grid needs 0 < lo < hi and count >= 2");
        for (int i = 0; i < count; ++i) {
            double s = static_cast<double>(i) / (count - 1);
            out.push_back(kind == "geom" ? lo * std::pow(hi / lo, s) : lo + (hi - lo) * s);
        }
    } else {
        throw std::invalid_argument("unknown grid kind: " + kind);
    }
    if (out.empty()) throw std::invalid_argument("empty grid");
    for (double v : out)
        if (!(v > 0) || !(v < 1)) throw std::invalid_argument("grid values must lie in (0, 1)");
    bool up = true, down = true;
    for (std::size_t i = 1; i < out.size(); ++i) {
        up = up && out[i] > out[i - 1];
        down = down && out[i] < out[i - 1];
    }
    if (!up && !down) throw std::invalid_argument("grid values must be strictly monotone");
    return out;
}

}  // namespace separatrix
