#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "separatrix/asymptotics.hpp"
#include "separatrix/flow.hpp"
#include "separatrix/splitting.hpp"

using namespace separatrix;

namespace {

const FormalPipeline& mcmillan_pipeline() {
    static FormalPipeline fp = build_formal_pipeline(load_map("builtin:mcmillan"), 2);
    return fp;
}

Real rel(const Real& a, const Real& b) { return abs(a - b) / abs(b); }

}  // namespace

TEST_CASE("homoclinic invariant is an antisymmetric determinant") {
    Vec2<double> u(0.3, -1.2), v(2.0, 0.5);
    CHECK(homoclinic_invariant(u, v) == doctest::Approx(-homoclinic_invariant(v, u)));
    CHECK(homoclinic_invariant(u, Vec2<double>(2 * u)) == 0.0);
}

TEST_CASE("two primary orbits with opposite invariants at delta = 0.35") {
    const auto& fp = mcmillan_pipeline();
    SplittingConfig cfg;
    SplittingRecord r = compute_splitting(fp, 0.35, cfg);
    PrecisionScope scope(r.digits);
    REQUIRE(r.orbits.size() == 2);
    for (const auto& o : r.orbits) CHECK(o.residual < ten_pow<Real>(20 - r.digits));
    CHECK(r.omega_plus > 0);
    CHECK(r.omega_minus < 0);
    CHECK(r.conjugacy_residual < ten_pow<Real>(1 - r.digits));
    CHECK(r.lobe_quadrature_change < ten_pow<Real>(10 - r.digits));
    CHECK(r.amplitude > 0);

    SUBCASE("omega does not depend on normalization, truncation or seeding") {
        SplittingConfig other = cfg;
        other.s0_fraction = 0.1;
        other.j_max = 200;
        other.use_reversor = true;
        other.samples = 12;
        SplittingRecord q = compute_splitting(fp, 0.35, other);
        CHECK(rel(q.omega_plus, r.omega_plus) < ten_pow<Real>(20 - r.digits) / abs(r.omega_plus));
        CHECK(rel(q.omega_minus, r.omega_minus) < ten_pow<Real>(20 - r.digits) / abs(r.omega_minus));
        CHECK(rel(q.lobe_area, r.lobe_area) < ten_pow<Real>(-20));
    }
}

TEST_CASE("degenerate lobe has zero area") {
    const auto& fp = mcmillan_pipeline();
    SplittingConfig cfg;
    int digits = splitting_digits(fp, 0.3, cfg);
    PrecisionScope scope(digits);
    auto ctx = build_context(fp, Real("0.3"), digits, cfg);
    auto hom = locate_homoclinics(fp, ctx, cfg);
    REQUIRE(hom.size() == 2);
    CHECK(abs(lobe_area(ctx.unstable, ctx.stable, hom[0], hom[0])) < ten_pow<Real>(-digits));
    Real a64 = lobe_area(ctx.unstable, ctx.stable, hom[0], hom[1], 64);
    Real a128 = lobe_area(ctx.unstable, ctx.stable, hom[0], hom[1], 128);
    CHECK(abs(a64 - a128) < ten_pow<Real>(10 - digits));
    // orbit phases are a fixed translate of the formal phase: t1 ~ t2 - shifts
    for (const auto& h : hom) CHECK(abs(h.t1 - (h.t2 - ctx.shift_unstable - ctx.shift_stable)) < Real(1));
}

TEST_CASE("reversible Henon family has two orbits under both seeding modes") {
    FormalPipeline fp = build_formal_pipeline(load_map("builtin:henon"), 2);
    SplittingConfig a, b;
    b.use_reversor = true;
    auto ra = compute_splitting(fp, 0.4, a);
    auto rb = compute_splitting(fp, 0.4, b);
    PrecisionScope scope(ra.digits);
    CHECK(rb.seed_mode == "reversor");
    CHECK(rel(ra.omega_plus, rb.omega_plus) < ten_pow<Real>(-40));
}

TEST_CASE("normalize_amplitude inverts the splitting law") {
    PrecisionScope scope(40);
    Real L("0.41"), pi = pi_value<Real>();
    Real omega = 2 * pi / (L * L) * exp(-2 * pi * pi / L);
    CHECK(abs(normalize_amplitude(omega, L) - 1) < ten_pow<Real>(-35));
    CHECK(abs(normalize_amplitude(-omega, L) - 1) < ten_pow<Real>(-35));
}

TEST_CASE("even-series fit recovers constructed coefficients") {
    PrecisionScope scope(40);
    std::vector<std::pair<Real, Real>> pts;
    for (int i = 0; i < 8; ++i) {
        Real d = Real(25 + 3 * i) / 100;
        pts.emplace_back(d, 2 + 3 * d * d);
    }
    auto f = fit_even_series(pts, 1);
    CHECK(abs(f.coefficients[0] - 2) < ten_pow<Real>(-30));
    CHECK(abs(f.coefficients[1] - 3) < ten_pow<Real>(-30));
    CHECK(f.residual_norm < ten_pow<Real>(-30));

    SUBCASE("an unmodeled delta^4 term leaves residuals shrinking like delta^4") {
        std::vector<Real> res;
        for (int scale : {1, 2}) {
            std::vector<std::pair<Real, Real>> q;
            for (int i = 0; i < 6; ++i) {
                Real d = Real(10 + 2 * i) / Real(100 * scale);
                q.emplace_back(d, 1 + d * d / 2 + 5 * pow(d, 4));
            }
            res.push_back(fit_even_series(q, 1).residual_norm);
        }
        double ratio = to_double(res[0] / res[1]);
        CHECK(ratio == doctest::Approx(16).epsilon(0.05));
    }
    CHECK_THROWS_AS(fit_even_series({pts.begin(), pts.begin() + 2}, 1), FitError);
}

TEST_CASE("order regression") {
    std::vector<std::pair<double, double>> exact, perturbed;
    for (double d : {0.25, 0.125, 0.0625, 0.03125}) {
        exact.emplace_back(d, d * d * d);
        perturbed.emplace_back(d, d * d * d * (1 + d));
    }
    auto a = order_regression(exact, 3);
    CHECK(a.slope == doctest::Approx(3.0));
    CHECK(a.pass);
    auto b = order_regression(perturbed, 3);
    CHECK(b.slope >= 2.75);
    CHECK(b.slope <= 3.25);
    auto c = order_regression(exact, 4);
    CHECK_FALSE(c.pass);
    exact.emplace_back(0.01, 1e-80);
    auto d = order_regression(exact, 3, 1e-60);
    CHECK(d.excluded.size() == 1);
}

TEST_CASE("grid parsing") {
    auto g = parse_grid("geom:0.25:0.45:8");
    REQUIRE(g.size() == 8);
    CHECK(g.front() == doctest::Approx(0.25));
    CHECK(g.back() == doctest::Approx(0.45));
    CHECK(g[1] / g[0] == doctest::Approx(g[7] / g[6]));
    CHECK(parse_grid("list:0.4,0.3,0.2").size() == 3);
    CHECK_THROWS(parse_grid("geom:0.45:0.25:8"));
    CHECK_THROWS(parse_grid("list:0.2,0.3,0.25"));
    CHECK_THROWS(parse_grid("cubic:1:2:3"));
}

TEST_CASE("first-order flow separatrix is the limit-flow orbit") {
    PrecisionScope scope(40);
    MapFamily m = load_map("builtin:mcmillan");
    auto sh = scaled_hamiltonian(interpolate(m, 1), 1);
    Real delta("0.3");
    Poly2<Real> H = scaled_polynomial<Real>(sh, delta);
    // a = b = 1: saddle at X = -1, amplitude 3, e^s coefficient 12
    FlowSeparatrix<Real> fs(H, Vec2<Real>(Real(-1), Real(0)), Real(12), 80, 30, working_tolerance<Real>(40));
    CHECK(abs(fs.exponent() - delta * sqrt(Real(2))) < ten_pow<Real>(-38));
    Real e0 = fs.flow().energy(fs.saddle());
    for (double s : {-12.0, -3.0, 0.0, 1.5, 4.0}) {
        Vec2<Real> p = fs(Real(s));
        Real c = cosh(Real(s) / 2);
        CHECK(abs(p(0) - (-1 + 3 / (c * c))) < ten_pow<Real>(-35));
        CHECK(abs(fs.flow().energy(p) - e0) < ten_pow<Real>(5 - 40));
    }
    Vec2<Real> far = fs(Real(-60));
    CHECK(abs(far(0) + 1) < ten_pow<Real>(-20));
}

TEST_CASE("extension experiment") {
    PrecisionScope scope(30);
    MapFamily m = load_map("builtin:mcmillan");
    Real delta("0.2");
    auto F = scaled_map<Real>(m, delta);
    Vec2<Real> z(Real("0.5"), Real(0));
    auto same = extension_experiment<Real>(F, F, z, z, delta, 2, Real(5));
    CHECK(same.deviation == 0);
    CHECK(same.steps == 25);

    auto sh = scaled_hamiltonian(interpolate(m, 2), 2);
    std::vector<Real> k;
    for (const char* d : {"0.2", "0.1", "0.05"}) {
        Real dl(d);
        auto Fd = scaled_map<Real>(m, dl);
        PolynomialFlow<Real> flow(scaled_polynomial<Real>(sh, dl));
        auto G = [&](const Vec2<Real>& p) { return taylor_flow(flow, p, Real(1), 24, ten_pow<Real>(-40)); };
        k.push_back(extension_experiment<Real>(Fd, G, z, z, dl, 2, Real(5)).k_hat);
    }
    for (std::size_t i = 1; i < k.size(); ++i) CHECK(k[i] / k[i - 1] < Real("1.5"));
}

TEST_CASE("formal evaluator tails match the partial sums near the saddle") {
    PrecisionScope scope(40);
    const auto& fp = mcmillan_pipeline();
    FormalEvaluator<Real> fe(fp.original, Real("0.3"), 5, 5);
    auto [p, dp] = fe(Real(-40));
    Vec2<Real> lin = fe.limit() + fe.tail(-1) * exp(Real(-40));
    CHECK(abs(p(0) - lin(0)) < ten_pow<Real>(-30));
    CHECK(abs(dp(0) - fe.tail(-1)(0) * exp(Real(-40))) < ten_pow<Real>(-30));
    auto [q, dq] = fe(Real(40));
    Vec2<Real> lin2 = fe.limit() + fe.tail(1) * exp(Real(-40));
    CHECK(abs(q(1) - lin2(1)) < ten_pow<Real>(-30));
}
