#include "separatrix/formal_separatrix.hpp"

#include <mutex>

namespace separatrix {

Coefficient Potential::at(int k, int m) const {
    auto it = u.find({k, m});
    return it == u.end() ? Coefficient() : it->second;
}

Potential extract_potential(const FormalHamiltonian& h) {
    if (h.form != HamiltonianForm::mechanical) throw FormalError("extract_potential: Hamiltonian is not mechanical");
    Potential p;
    p.weight = h.parts.truncation() / 2;
    for (const auto& [ord, poly] : h.parts.parts()) {
        for (const auto& [t, c] : poly.terms()) {
            if (t.l == 0 && t.k > 0) p.u[{t.k, t.m}] = c;
            if (t.l > 0 && !(t.k == 0 && t.l == 2 && t.m == 0))
                throw FormalError("extract_potential: y-dependent term beyond y^2/2");
        }
    }
    return p;
}

BaseOrder solve_base_order(const Coefficient& u30, const Coefficient& u11) {
    if (u30.is_zero()) throw FormalError("base order: u30 = 0");
    if (!u30.is_rational() || !u11.is_rational()) throw FormalError("base order: u30, u11 must be rational");
    Rational radicand = -u11.rational_part() / (3 * u30.rational_part());
    if (radicand <= 0) throw FormalError("base order: non-positive radicand -u11/(3 u30); wrong side of the bifurcation");
    BaseOrder b;
    Coefficient root = Coefficient::sqrt_of(radicand);
    b.b0 = (Coefficient(-3) * u30 * root).sign() > 0 ? root : -root;
    b.b0_alternative = -b.b0;
    b.b1 = Coefficient(-3) * b.b0;
    b.a1 = Coefficient(-3) * u30 * b.b0;
    b.c3 = u11 * b.b0 + u30 * pow(b.b0, 3);
    return b;
}

namespace {

using WSeries = std::vector<EtaCoeffs>;

WSeries w_mul(const WSeries& a, const WSeries& b, int J) {
    WSeries out(J + 1);
    for (int i = 0; i < static_cast<int>(a.size()) && i <= J; ++i) {
        if (a[i].empty()) continue;
        for (int j = 0; j < static_cast<int>(b.size()) && i + j <= J; ++j)
            if (!b[j].empty()) out[i + j] = poly_add(out[i + j], poly_mul(a[i], b[j]));
    }
    return out;
}

void w_add_to(WSeries& a, const WSeries& b, const Coefficient& c, int shift) {
    for (int j = 0; j < static_cast<int>(b.size()); ++j) {
        int idx = j + shift;
        if (idx >= static_cast<int>(a.size())) break;
        a[idx] = poly_add(a[idx], poly_scale(b[j], c));
    }
}

}  // namespace

FormalSeparatrixData start_separatrix(const Potential& u) {
    FormalSeparatrixData s;
    s.potential = u;
    if (u.weight < 3) throw FormalError("potential known only through weight " + std::to_string(u.weight));
    s.base = solve_base_order(u.at(3, 0), u.at(1, 1));
    s.A = Coefficient(3) * u.at(3, 0) * s.base.b1 * s.base.b0;
    if (s.A.is_zero()) throw FormalError("A = 3 u30 b1 b0 vanishes");
    s.x = {EtaCoeffs{}, EtaCoeffs{s.base.b0, s.base.b1}};
    s.a = {Coefficient(), s.base.a1};
    s.c[3] = s.base.c3;
    return s;
}

std::vector<EtaCoeffs> squared_residual(const FormalSeparatrixData& s, int J) {
    if (s.potential.weight < J)
        throw FormalError("residual through delta^" + std::to_string(2 * J) + " needs potential weight " +
                          std::to_string(J));
    WSeries X(J + 1), Xp(J + 1), beta(J + 1), c(J + 1);
    for (int k = 1; k <= s.order() && k <= J; ++k) {
        X[k] = s.x[k];
        Xp[k] = poly_derivative(s.x[k]);
    }
    for (int k = 1; k < static_cast<int>(s.a.size()) && k <= J; ++k)
        if (!s.a[k].is_zero()) beta[k] = {s.a[k]};
    for (const auto& [k, v] : s.c)
        if (k <= J && !v.is_zero()) c[k] = {v};
    WSeries out = w_mul(beta, w_mul(Xp, Xp, J), J);
    static const EtaCoeffs eta1_sq{Coefficient(0), Coefficient(0), Coefficient(1), Coefficient(-1)};
    for (auto& p : out) p = poly_mul(p, eta1_sq);
    // U(x, eps) with eps = delta^4
    int kmax = 0;
    for (const auto& [km, v] : s.potential.u) kmax = std::max(kmax, km.first);
    WSeries power(J + 1);
    power[0] = {Coefficient(1)};
    for (int k = 1; k <= std::min(kmax, J); ++k) {
        power = w_mul(power, X, J);
        for (int m = 0; k + 2 * m <= J; ++m) {
            Coefficient ukm = s.potential.at(k, m);
            if (!ukm.is_zero()) w_add_to(out, power, ukm, 2 * m);
        }
    }
    w_add_to(out, c, Coefficient(-1), 0);
    return out;
}

void solve_order_n(FormalSeparatrixData& s, int n) {
    if (n < 2 || s.order() != n - 1) throw FormalError("solve_order_n: orders below n must be complete");
    s.x.push_back({});
    s.a.push_back(Coefficient());
    EtaCoeffs pt = squared_residual(s, n + 2)[n + 2];
    if (poly_degree(pt) > n + 2) throw FormalError("solve_order_n: source term exceeds degree n+2");
    auto P = [&](int j) { return j < static_cast<int>(pt.size()) ? pt[j] : Coefficient(); };
    const Coefficient& A = s.A;
    const Coefficient& b1 = s.base.b1;
    Coefficient ab = s.base.a1 * b1;
    auto nonzero = [](const Coefficient& d, const char* what) {
        if (d.is_zero()) throw FormalError(std::string("solve_order_n: zero denominator ") + what);
        return d;
    };
    EtaCoeffs b(n + 1);
    Coefficient cn = P(0);
    b[0] = -P(1) / nonzero(Coefficient(2) * A, "2A");
    b[n] = P(n + 2) / nonzero(Coefficient(2 * n) * ab + Coefficient(3) * A, "2n a1 b1 + 3A");
    for (int j = n + 1; j >= 4; --j)
        b[j - 2] = (b[j - 1] * (Coefficient(2 * (j - 1)) * ab + Coefficient(2) * A) + P(j)) /
                   nonzero(Coefficient(2 * (j - 2)) * ab + Coefficient(3) * A, "2(j-2) a1 b1 + 3A");
    // [[2ab + 2A, b1^2], [-2ab - 3A, -b1^2]] (b_n1, a_n) = rhs
    Coefficient m11 = Coefficient(2) * ab + Coefficient(2) * A, m12 = b1 * b1;
    Coefficient m21 = Coefficient(-2) * ab - Coefficient(3) * A, m22 = -(b1 * b1);
    Coefficient r1 = Coefficient(3) * A * b[0] - P(2);
    Coefficient r2 = -(Coefficient(4) * ab + Coefficient(2) * A) * b[2] - P(3);
    Coefficient det = nonzero(m11 * m22 - m12 * m21, "A b1^2");
    b[1] = (r1 * m22 - m12 * r2) / det;
    Coefficient an = (m11 * r2 - m21 * r1) / det;
    trim(b);
    s.x[n] = b;
    s.a[n] = an;
    s.c[n + 2] = cn;
    EtaCoeffs check = squared_residual(s, n + 2)[n + 2];
    if (!check.empty()) throw FormalError("solve_order_n: residual does not vanish at order " + std::to_string(n));
}

FormalSeparatrixData solve_formal_separatrix(const Potential& u, int N) {
    if (u.weight < N + 2)
        throw FormalError("formal separatrix of order " + std::to_string(N) + " needs potential weight " +
                          std::to_string(N + 2));
    FormalSeparatrixData s = start_separatrix(u);
    for (int n = 2; n <= N; ++n) solve_order_n(s, n);
    return s;
}

MuSeries MuAlgebra::zero() const { return {std::vector<EtaPolynomial>(J_ + 1), std::vector<EtaPolynomial>(J_ + 1)}; }

MuSeries MuAlgebra::one() const {
    MuSeries s = zero();
    s.A[0] = EtaPolynomial::constant(Coefficient(1));
    return s;
}

MuSeries MuAlgebra::add(const MuSeries& a, const MuSeries& b) const {
    MuSeries out = a;
    for (int j = 0; j <= J_; ++j) {
        out.A[j] += b.A[j];
        out.B[j] += b.B[j];
    }
    return out;
}

MuSeries MuAlgebra::scale(const MuSeries& a, const Coefficient& c) const {
    MuSeries out = a;
    for (int j = 0; j <= J_; ++j) {
        out.A[j] *= c;
        out.B[j] *= c;
    }
    return out;
}

MuSeries MuAlgebra::mul(const MuSeries& a, const MuSeries& b) const {
    MuSeries out = zero();
    std::vector<EtaPolynomial> bb(J_ + 1);
    for (int i = 0; i <= J_; ++i) {
        for (int j = 0; i + j <= J_; ++j) {
            if (!a.A[i].is_zero() && !b.A[j].is_zero()) out.A[i + j] += a.A[i] * b.A[j];
            if (!a.A[i].is_zero() && !b.B[j].is_zero()) out.B[i + j] += a.A[i] * b.B[j];
            if (!a.B[i].is_zero() && !b.A[j].is_zero()) out.B[i + j] += a.B[i] * b.A[j];
            if (!a.B[i].is_zero() && !b.B[j].is_zero()) bb[i + j] += a.B[i] * b.B[j];
        }
    }
    // mu^2 = 2 sum_k a_k delta^{2k}
    for (int i = 0; i <= J_; ++i) {
        if (bb[i].is_zero()) continue;
        for (int k = 1; k < static_cast<int>(beta_.size()) && i + k <= J_; ++k)
            if (!beta_[k].is_zero()) out.A[i + k] += bb[i] * (Coefficient(2) * beta_[k]);
    }
    return out;
}

FormalSeparatrix assemble(const FormalSeparatrixData& s, int N) {
    if (s.order() < N) throw FormalError("assemble: only " + std::to_string(s.order()) + " orders solved");
    FormalSeparatrix out;
    MuAlgebra alg(std::vector<Coefficient>(s.a.begin(), s.a.begin() + N + 1), N);
    out.x = alg.zero();
    out.y = alg.zero();
    for (int k = 1; k <= N; ++k) {
        out.x.A[k] = EtaPolynomial(s.x[k]);
        out.y.B[k] = s.xdot(k);
    }
    out.beta = alg.beta();
    out.order = N;
    return out;
}

namespace {

void check_structure(const MuSeries& s, const char* comp) {
    for (std::size_t j = 0; j < s.A.size(); ++j) {
        if (!s.A[j].Q().empty() || poly_degree(s.A[j].P()) > static_cast<int>(j))
            throw FormalError(std::string("invert_change: ") + comp + " even part violates structure at delta^" +
                              std::to_string(2 * j));
        if (!s.B[j].P().empty() || poly_degree(s.B[j].Q()) > static_cast<int>(j) - 1)
            throw FormalError(std::string("invert_change: ") + comp + " odd part violates structure at delta^" +
                              std::to_string(2 * j + 1));
    }
}

}  // namespace

FormalSeparatrix invert_change(const FormalSeparatrixData& s, const std::vector<QhPolynomial>& log, int N) {
    FormalSeparatrix mech = assemble(s, N);
    int top = 2 * N + 1;
    for (const auto& chi : log)
        if (!chi.is_zero() && chi.order() < 6) throw FormalError("invert_change: generator below order 6");
    if (!log.empty() && log.back().order() < top + 2)
        throw FormalError("invert_change: change log known only through order " + std::to_string(log.back().order()) +
                          ", need " + std::to_string(top + 2));
    auto [cx, cy] = change_map(log, top);
    MuAlgebra alg(mech.beta, N);
    MuSeries eps = alg.zero();
    if (N >= 2) eps.A[2] = EtaPolynomial::constant(Coefficient(1));
    std::map<std::tuple<int, int, int>, MuSeries> cache;
    std::vector<MuSeries> xp{alg.one()}, yp{alg.one()}, ep{alg.one()};
    auto power = [&](std::vector<MuSeries>& tab, const MuSeries& base, int n) -> const MuSeries& {
        while (static_cast<int>(tab.size()) <= n) tab.push_back(alg.mul(tab.back(), base));
        return tab[n];
    };
    auto substitute = [&](const QhSeries& comp) {
        MuSeries out = alg.zero();
        for (const auto& [p, poly] : comp.parts()) {
            for (const auto& [t, c] : poly.terms()) {
                MuSeries term = alg.mul(alg.mul(power(xp, mech.x, t.k), power(yp, mech.y, t.l)), power(ep, eps, t.m));
                out = alg.add(out, alg.scale(term, c));
            }
        }
        return out;
    };
    FormalSeparatrix out;
    out.x = substitute(cx);
    out.y = substitute(cy);
    out.beta = mech.beta;
    out.order = N;
    check_structure(out.x, "x");
    check_structure(out.y, "y");
    return out;
}

const EtaLaurent& eta_laurent(int r_max) {
    static std::mutex mtx;
    static EtaLaurent cache;
    std::lock_guard<std::mutex> lock(mtx);
    if (static_cast<int>(cache.E.size()) > r_max) return cache;
    int n = std::max(r_max + 1, 41);
    // sinh(s/2)/(s/2) = sum v^k / (4^k (2k+1)!) with v = s^2
    std::vector<Rational> S(n), inv(n), inv2(n);
    Rational fact = 1;
    Rational four = 1;
    for (int k = 0; k < n; ++k) {
        if (k > 0) {
            fact *= Rational((2 * k) * (2 * k + 1));
            four *= 4;
        }
        S[k] = 1 / (four * fact);
    }
    inv[0] = 1;
    for (int k = 1; k < n; ++k) {
        Rational acc = 0;
        for (int j = 1; j <= k; ++j) acc += S[j] * inv[k - j];
        inv[k] = -acc;
    }
    for (int k = 0; k < n; ++k) {
        Rational acc = 0;
        for (int j = 0; j <= k; ++j) acc += inv[j] * inv[k - j];
        inv2[k] = acc;
    }
    cache.E.clear();
    cache.F.clear();
    for (int r = 0; r < n; ++r) {
        Coefficient e(-4 * inv2[r]);
        cache.E.push_back(e);
        cache.F.push_back(e * Coefficient(2 * r - 2));
    }
    return cache;
}

namespace {

// Coefficients of (sum_{k>=1} 2 a_k w^{k-1})^e through w^L, e any integer.
std::vector<Coefficient> mu_hat_power(const std::vector<Coefficient>& beta, int e, int L) {
    std::vector<Coefficient> base(L + 1);
    for (int l = 0; l <= L; ++l)
        if (l + 1 < static_cast<int>(beta.size())) base[l] = Coefficient(2) * beta[l + 1];
    auto mul = [&](const std::vector<Coefficient>& a, const std::vector<Coefficient>& b) {
        std::vector<Coefficient> out(L + 1);
        for (int i = 0; i <= L; ++i)
            for (int j = 0; i + j <= L; ++j) out[i + j] += a[i] * b[j];
        return out;
    };
    std::vector<Coefficient> b = base;
    if (e < 0) {
        std::vector<Coefficient> inv(L + 1);
        inv[0] = Coefficient(1) / base[0];
        for (int k = 1; k <= L; ++k) {
            Coefficient acc;
            for (int j = 1; j <= k; ++j) acc += base[j] * inv[k - j];
            inv[k] = -acc / base[0];
        }
        b = inv;
        e = -e;
    }
    std::vector<Coefficient> out(L + 1);
    out[0] = Coefficient(1);
    for (int i = 0; i < e; ++i) out = mul(out, b);
    return out;
}

}  // namespace

LaurentTable laurent_reexpand(const FormalSeparatrix& sep, int m_max, int k_max) {
    int need = (k_max + 3) / 2;
    if (need > sep.order)
        throw FormalError("laurent_reexpand: k_max = " + std::to_string(k_max) + " needs formal order " +
                          std::to_string(need));
    int J = sep.order;
    int max_deg = J + 1;
    const EtaLaurent& el = eta_laurent(m_max + max_deg + 2);
    int R = static_cast<int>(el.E.size());
    // Laurent coefficients of eta0^i and eta1 eta0^i in powers of s^2
    std::vector<std::vector<Coefficient>> E_pow(max_deg + 1), G_pow(max_deg + 1);
    E_pow[0] = std::vector<Coefficient>(R);
    E_pow[0][0] = Coefficient(1);
    for (int i = 1; i <= max_deg; ++i) {
        E_pow[i] = std::vector<Coefficient>(R);
        for (int r = 0; r < R; ++r)
            for (int q = 0; q <= r; ++q) E_pow[i][r] += E_pow[i - 1][q] * el.E[r - q];
    }
    for (int i = 0; i <= max_deg; ++i) {
        G_pow[i] = std::vector<Coefficient>(R);
        for (int r = 0; r < R; ++r)
            for (int q = 0; q <= r; ++q) G_pow[i][r] += E_pow[i][q] * el.F[r - q];
    }
    int L = m_max + max_deg + 2;
    std::map<int, std::vector<Coefficient>> hat;
    auto hat_pow = [&](int e) -> const std::vector<Coefficient>& {
        auto it = hat.find(e);
        if (it == hat.end()) it = hat.emplace(e, mu_hat_power(sep.beta, e, L)).first;
        return it->second;
    };
    // (m, tau power) -> coefficient
    auto expand = [&](const MuSeries& comp) {
        std::map<std::pair<int, int>, Coefficient> acc;
        auto add = [&](int j, int i, const Coefficient& c, bool odd) {
            for (int r = 0; r < R; ++r) {
                const Coefficient& lc = odd ? G_pow[i][r] : E_pow[i][r];
                if (lc.is_zero()) continue;
                // even: w^{j+r-i} (2 hat)^{r-i} tau^{2(r-i)}; odd: w^{j+r-1-i} (2 hat)^{r-1-i} tau^{2r-3-2i}
                int e = odd ? r - 1 - i : r - i;
                int w0 = j + e;
                if (w0 > m_max) break;
                int tau = odd ? 2 * r - 3 - 2 * i : 2 * (r - i);
                const auto& hp = hat_pow(e);
                for (int l = 0; w0 + l <= m_max; ++l) {
                    if (w0 + l < 0 || hp[l].is_zero()) continue;
                    acc[{w0 + l, tau}] += c * lc * hp[l];
                }
            }
        };
        for (int j = 0; j <= J; ++j) {
            for (std::size_t i = 0; i < comp.A[j].P().size(); ++i)
                if (!comp.A[j].P()[i].is_zero()) add(j, static_cast<int>(i), comp.A[j].P()[i], false);
            for (std::size_t i = 0; i < comp.B[j].Q().size(); ++i)
                if (!comp.B[j].Q()[i].is_zero()) add(j, static_cast<int>(i), comp.B[j].Q()[i], true);
        }
        return acc;
    };
    LaurentTable t;
    t.m_max = m_max;
    t.k_max = k_max;
    auto ax = expand(sep.x);
    auto ay = expand(sep.y);
    for (const auto& [key, c] : ax)
        if (!c.is_zero() && key.first >= 0 && key.second > 2 * key.first - 2)
            throw FormalError("laurent_reexpand: x-part exceeds leading power tau^{2m-2}");
    for (const auto& [key, c] : ay)
        if (!c.is_zero() && key.first >= 0 && key.second > 2 * key.first - 3)
            throw FormalError("laurent_reexpand: y-part exceeds leading power tau^{2m-3}");
    t.x.assign(m_max + 1, std::vector<Coefficient>(k_max + 1));
    t.y.assign(m_max + 1, std::vector<Coefficient>(k_max + 1));
    for (int m = 0; m <= m_max; ++m) {
        for (int k = 0; k <= k_max; ++k) {
            auto ix = ax.find({m, 2 * m - 2 - k});
            if (ix != ax.end()) t.x[m][k] = ix->second;
            auto iy = ay.find({m, 2 * m - 3 - k});
            if (iy != ay.end()) t.y[m][k] = iy->second;
        }
    }
    return t;
}

FormalPipeline build_formal_pipeline(const MapFamily& map, int N) {
    if (N < 1) throw FormalError("formal separatrix order must be >= 1");
    FormalPipeline fp;
    std::tie(fp.map, fp.signs) = normalize_signs(map);
    int n = 2 * N;
    fp.raw = interpolate(fp.map, n);
    fp.mechanical = simplify(fp.raw, n);
    fp.data = solve_formal_separatrix(extract_potential(fp.mechanical), N);
    fp.original = invert_change(fp.data, fp.mechanical.change_log, N);
    fp.order = N;
    return fp;
}

nlohmann::json eta_to_json(const EtaPolynomial& p) {
    nlohmann::json j;
    j["P"] = nlohmann::json::array();
    for (const auto& c : p.P()) j["P"].push_back(coefficient_to_json(c));
    j["Q"] = nlohmann::json::array();
    for (const auto& c : p.Q()) j["Q"].push_back(coefficient_to_json(c));
    return j;
}

nlohmann::json to_json(const FormalSeparatrixData& d) {
    nlohmann::json j;
    j["order"] = d.order();
    long radicand = d.base.b0.radicand();
    j["context"] = {{"d_num", std::to_string(d.base.b0.is_rational() ? 0 : radicand)}, {"d_den", "1"}};
    nlohmann::json xs = nlohmann::json::array(), ys = nlohmann::json::array(), as = nlohmann::json::array();
    for (int k = 1; k <= d.order(); ++k) {
        xs.push_back({{"k", k}, {"eta", eta_to_json(EtaPolynomial(d.x[k]))}});
        ys.push_back({{"k", k}, {"eta", eta_to_json(d.xdot(k))}});
        as.push_back({{"k", k}, {"value", coefficient_to_json(d.a[k])}});
    }
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& [k, v] : d.c) cs.push_back({{"k", k}, {"value", coefficient_to_json(v)}});
    j["x"] = xs;
    j["xdot"] = ys;
    j["a"] = as;
    j["c"] = cs;
    j["b0"] = coefficient_to_json(d.base.b0);
    j["b0_alternative"] = coefficient_to_json(d.base.b0_alternative);
    j["A"] = coefficient_to_json(d.A);
    nlohmann::json us = nlohmann::json::array();
    for (const auto& [km, v] : d.potential.u) {
        nlohmann::json e = coefficient_to_json(v);
        e["k"] = km.first;
        e["m"] = km.second;
        us.push_back(e);
    }
    j["potential"] = us;
    return j;
}

nlohmann::json to_json(const FormalSeparatrix& s) {
    auto comp = [](const MuSeries& m) {
        nlohmann::json even = nlohmann::json::array(), odd = nlohmann::json::array();
        for (std::size_t j = 0; j < m.A.size(); ++j) {
            if (!m.A[j].is_zero()) even.push_back({{"delta_power", 2 * j}, {"eta", eta_to_json(m.A[j])}});
            if (!m.B[j].is_zero()) odd.push_back({{"mu_delta_power", 2 * j}, {"eta", eta_to_json(m.B[j])}});
        }
        return nlohmann::json{{"even", even}, {"mu_part", odd}};
    };
    nlohmann::json beta = nlohmann::json::array();
    for (std::size_t k = 1; k < s.beta.size(); ++k) beta.push_back(coefficient_to_json(s.beta[k]));
    return {{"order", s.order}, {"x", comp(s.x)}, {"y", comp(s.y)}, {"beta", beta}};
}

nlohmann::json to_json(const LaurentTable& t) {
    auto table = [](const std::vector<std::vector<Coefficient>>& v) {
        nlohmann::json out = nlohmann::json::array();
        for (std::size_t m = 0; m < v.size(); ++m)
            for (std::size_t k = 0; k < v[m].size(); ++k)
                if (!v[m][k].is_zero()) {
                    nlohmann::json e = coefficient_to_json(v[m][k]);
                    e["m"] = m;
                    e["k"] = k;
                    out.push_back(e);
                }
        return out;
    };
    return {{"m_max", t.m_max}, {"k_max", t.k_max}, {"x", table(t.x)}, {"y", table(t.y)}};
}

}  // namespace separatrix
