#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "separatrix/formal_separatrix.hpp"

#include <cmath>
#include <complex>
#include <fstream>

using namespace separatrix;

namespace {

nlohmann::json golden(const std::string& name) {
    std::ifstream in(std::string(SEPARATRIX_GOLDEN_DIR) + "/" + name + ".json");
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

// [p_num, p_den, q_num, q_den] with sqrt of the golden radicand
Coefficient golden_value(const nlohmann::json& v, long d) {
    Rational p(Integer(v[0].get<std::string>()), Integer(v[1].get<std::string>()));
    Rational q(Integer(v[2].get<std::string>()), Integer(v[3].get<std::string>()));
    return q == 0 ? Coefficient(p) : Coefficient(p, q, d);
}

EtaCoeffs golden_poly(const nlohmann::json& obj, long d) {
    EtaCoeffs out;
    for (const auto& [k, v] : obj.items()) {
        std::size_t i = std::stoul(k);
        if (out.size() <= i) out.resize(i + 1);
        out[i] = golden_value(v, d);
    }
    trim(out);
    return out;
}

Coefficient q(long n, long d = 1) { return Coefficient::fraction(n, d); }

}  // namespace

TEST_CASE("eta algebra examples") {
    CHECK(eta_reduce({{{0, 2}, q(1)}}) == EtaPolynomial({q(0), q(0), q(1), q(-1)}));
    CHECK(eta_reduce({{{0, 3}, q(1)}}) == EtaPolynomial({}, {q(0), q(0), q(1), q(-1)}));
    CHECK(eta_reduce({{{1, 0}, q(1)}}) == EtaPolynomial::eta0());
    CHECK(eta_derivative(EtaPolynomial::eta0()) == EtaPolynomial::eta1());
    CHECK(eta_derivative(EtaPolynomial::eta1()) == EtaPolynomial({q(0), q(1), q(-3, 2)}));
    CHECK(eta_derivative(EtaPolynomial::constant(q(5))).is_zero());
    CHECK(EtaPolynomial::eta1() * EtaPolynomial::eta1() == EtaPolynomial({q(0), q(0), q(1), q(-1)}));
}

TEST_CASE("eta values satisfy the algebra numerically") {
    for (double t : {-3.0, -0.4, 0.0, 1.3, 5.0}) {
        auto [e0, e1] = eta_values(t);
        CHECK(e1 * e1 == doctest::Approx(e0 * e0 - e0 * e0 * e0).epsilon(1e-12));
        double h = 1e-5;
        auto [p0, p1] = eta_values(t + h);
        auto [m0, m1] = eta_values(t - h);
        CHECK((p0 - m0) / (2 * h) == doctest::Approx(e1).epsilon(1e-8));
        CHECK((p1 - m1) / (2 * h) == doctest::Approx(e0 - 1.5 * e0 * e0).epsilon(1e-8));
    }
}

TEST_CASE("base order closed forms") {
    BaseOrder b = solve_base_order(q(1, 3), q(-1));
    CHECK(b.b0 == q(-1));
    CHECK(b.b1 == q(3));
    CHECK(b.a1 == q(1));
    CHECK(b.c3 == q(2, 3));
    CHECK(b.b0_alternative == q(1));
    // x1 = -1 + 3 eta0 reaches the turning point 2 at t = 0
    CHECK(b.b0 + b.b1 == q(2));
    CHECK_THROWS_AS(solve_base_order(q(1, 3), q(1)), FormalError);
    BaseOrder r = solve_base_order(q(1, 3), q(-2));
    CHECK(r.b0 == -Coefficient::sqrt_of(Rational(2)));
    CHECK(r.a1.sign() > 0);
}

TEST_CASE("order 2 identities") {
    Potential u;
    u.weight = 4;
    u.u[{3, 0}] = q(1, 3);
    u.u[{1, 1}] = q(-1);
    u.u[{4, 0}] = q(2, 7);
    FormalSeparatrixData s = solve_formal_separatrix(u, 2);
    Coefficient ab = s.base.a1 * s.base.b1;
    Coefficient den = q(4) * ab + q(3) * s.A;
    CHECK(den == q(9) * q(1, 3) * s.base.b0 * s.base.b0);
    CHECK(s.x[2][2] == q(2, 7) * pow(s.base.b1, 4) / den);
    CHECK(s.A * s.base.b1 * s.base.b1 == q(-81) * q(1, 3) * pow(s.base.b0, 4));

    Potential z = u;
    z.u.erase({4, 0});
    FormalSeparatrixData s0 = solve_formal_separatrix(z, 2);
    CHECK(poly_degree(s0.x[2]) < 2);
    CHECK(s0.c.at(4).is_zero());
}

TEST_CASE("formal separatrix matches independent oracle") {
    for (std::string name : {"mcmillan", "henon", "sheared"}) {
        nlohmann::json g = golden(name);
        long d = g.at("sqrt_d").is_null() ? 0 : std::stol(g.at("sqrt_d").get<std::string>());
        FormalPipeline fp = build_formal_pipeline(load_map(name), 3);
        for (int k = 1; k <= 3; ++k) {
            CHECK_MESSAGE(EtaPolynomial(fp.data.x[k]) == EtaPolynomial(golden_poly(g["x"][std::to_string(k)], d)),
                          name << " x_" << k);
            CHECK_MESSAGE(fp.data.a[k] == golden_value(g["a"][std::to_string(k)], d), name << " a_" << k);
            CHECK_MESSAGE(fp.data.c.at(k + 2) == golden_value(g["c"][std::to_string(k + 2)], d), name << " c_" << k + 2);
        }
        // original variables through delta^5
        const auto& orig = g["original_through_delta5"];
        for (const char* comp : {"x", "y"}) {
            const MuSeries& ms = std::string(comp) == "x" ? fp.original.x : fp.original.y;
            for (int j = 0; j <= 2; ++j) {
                EtaCoeffs ea = orig[comp]["A"].contains(std::to_string(j))
                                   ? golden_poly(orig[comp]["A"][std::to_string(j)], d)
                                   : EtaCoeffs{};
                EtaCoeffs eb = orig[comp]["B"].contains(std::to_string(j))
                                   ? golden_poly(orig[comp]["B"][std::to_string(j)], d)
                                   : EtaCoeffs{};
                CHECK_MESSAGE(ms.A[j] == EtaPolynomial(ea), name << " " << comp << " A" << j);
                CHECK_MESSAGE(ms.B[j] == EtaPolynomial({}, eb), name << " " << comp << " B" << j);
            }
        }
    }
}

TEST_CASE("squared residual vanishes through delta^{2N+4}") {
    FormalPipeline fp = build_formal_pipeline(load_map("builtin:sheared"), 5);
    auto r = squared_residual(fp.data, 7);
    for (const auto& p : r) CHECK(p.empty());
    for (int k = 1; k <= 5; ++k) CHECK(poly_degree(fp.data.x[k]) <= k);
}

TEST_CASE("assemble") {
    FormalPipeline fp = build_formal_pipeline(load_map("builtin:mcmillan"), 3);
    FormalSeparatrix m = assemble(fp.data, 3);
    // y = delta^3 sqrt(2) 3 eta1 + ...: mu B[1] with B[1] = 3 eta1, mu0^2 = 2 a1 = 2
    CHECK(m.y.B[1] == EtaPolynomial({}, {q(3)}));
    CHECK(m.beta[1] == q(1));
    // y^2 - 2 beta xdot^2 = 0 in the mu algebra
    MuAlgebra alg(m.beta, 3);
    MuSeries y2 = alg.mul(m.y, m.y);
    MuSeries xd = alg.zero();
    for (int k = 1; k <= 3; ++k) xd.A[k] = fp.data.xdot(k);
    MuSeries beta = alg.zero();
    for (int k = 1; k <= 3; ++k) beta.A[k] = EtaPolynomial::constant(q(2) * m.beta[k]);
    MuSeries rhs = alg.mul(beta, alg.mul(xd, xd));
    for (int j = 0; j <= 3; ++j) CHECK(y2.A[j] == rhs.A[j]);
}

TEST_CASE("invert_change with identity log and leading order") {
    FormalPipeline fp = build_formal_pipeline(load_map("builtin:mcmillan"), 3);
    std::vector<QhPolynomial> identity;
    for (int p = 6; p <= 9; ++p) identity.emplace_back(p);
    FormalSeparatrix same = invert_change(fp.data, identity, 3);
    FormalSeparatrix mech = assemble(fp.data, 3);
    for (int j = 0; j <= 3; ++j) {
        CHECK(same.x.A[j] == mech.x.A[j]);
        CHECK(same.y.B[j] == mech.y.B[j]);
    }
    CHECK(fp.original.x.A[1] == EtaPolynomial(fp.data.x[1]));
    CHECK_THROWS_AS(invert_change(fp.data, std::vector<QhPolynomial>{QhPolynomial(6)}, 3), FormalError);
}

TEST_CASE("eta Laurent series") {
    const EtaLaurent& el = eta_laurent(10);
    CHECK(el.E[0] == q(-4));
    CHECK(el.E[1] == q(1, 3));
    CHECK(el.F[0] == q(8));
    // numeric oracle: -1/sinh^2(s/2) at small real s
    for (double s : {0.3, 0.7, 1.1}) {
        double direct = -1.0 / std::pow(std::sinh(s / 2), 2);
        double series = 0;
        for (int r = 0; r <= 10; ++r) series += el.E[r].to_double() * std::pow(s, 2 * r - 2);
        CHECK(series == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("Laurent table") {
    FormalPipeline fp = build_formal_pipeline(load_map("builtin:sheared"), 6);
    LaurentTable t = laurent_reexpand(fp.original, 3, 8);
    // x00 = -6/a with a = 1
    CHECK(t.x[0][0] == q(-6));
    // entries lie in Q(sqrt 2), a real field; no complex unit ever enters
    bool any_irrational = false;
    for (const auto& row : t.x)
        for (const auto& c : row) any_irrational |= !c.is_rational() && c.radicand() == 2;
    CHECK(any_irrational);
    FormalPipeline mc = build_formal_pipeline(load_map("builtin:mcmillan"), 6);
    LaurentTable tm = laurent_reexpand(mc.original, 3, 8);
    CHECK(tm.x[0][0] == q(-6));
    for (const auto& row : tm.x)
        for (const auto& c : row) CHECK(c.is_rational());
    CHECK_THROWS_AS(laurent_reexpand(fp.original, 3, 20), FormalError);
}

TEST_CASE("Laurent table reproduces the partial sum near the pole") {
    using C = std::complex<double>;
    FormalPipeline fp = build_formal_pipeline(load_map("builtin:mcmillan"), 6);
    const int M = 2, K = 2 * fp.original.order - 2;
    LaurentTable tab = laurent_reexpand(fp.original, M, K);
    // large |tau| keeps the k > K tail negligible, small delta keeps |mu tau| inside the radius 2 pi
    const C tau(40, 30);
    auto gap = [&](double delta) {
        double d2 = delta * delta, beta = 0, pw = d2;
        for (std::size_t k = 1; k < fp.original.beta.size(); ++k, pw *= d2) beta += fp.original.beta[k].to_double() * pw;
        double mu = std::sqrt(2 * beta);
        C t = C(0, M_PI) + mu * tau;
        C e0 = 1.0 / std::pow(std::cosh(t / 2.0), 2);
        C e1 = -std::sinh(t / 2.0) / std::pow(std::cosh(t / 2.0), 3);
        auto horner = [&](const EtaCoeffs& c) {
            C r = 0;
            for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * e0 + it->to_double();
            return r;
        };
        const MuSeries& x = fp.original.x;
        C direct = 0;
        for (std::size_t j = 0; j < x.A.size() && static_cast<int>(2 * j) - 2 <= K; ++j)
            direct += std::pow(d2, j) * horner(x.A[j].P());
        for (std::size_t j = 0; j < x.B.size() && static_cast<int>(2 * j) - 1 <= K; ++j)
            direct += mu * e1 * std::pow(d2, j) * horner(x.B[j].Q());
        C series = 0;
        for (int m = 0; m <= M; ++m)
            for (int k = 0; k <= K; ++k) series += std::pow(d2, m) * tab.x[m][k].to_double() * std::pow(tau, 2 * m - 2 - k);
        return std::abs(direct - series) / std::abs(series);
    };
    double g1 = gap(0.02), g2 = gap(0.01), g3 = gap(0.005);
    CHECK(g1 < 1e-2);
    // remainder starts at delta^{2M+2}
    CHECK(g1 / g2 == doctest::Approx(std::pow(2.0, 2 * M + 2)).epsilon(0.2));
    CHECK(g2 / g3 == doctest::Approx(std::pow(2.0, 2 * M + 2)).epsilon(0.2));
}
