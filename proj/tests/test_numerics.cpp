#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "separatrix/homoclinic.hpp"

#include <random>

using namespace separatrix;

namespace {

struct Setup {
    NumericMap<Real> map;
    SaddleData<Real> saddle;
};

Setup mcmillan(const Real& eps, int digits) {
    MapFamily m = load_map("builtin:mcmillan");
    NumericMap<Real> nm(m, eps);
    return {nm, find_saddle(nm, eps, Real(1), Real(1), working_tolerance<Real>(digits))};
}

}  // namespace

TEST_CASE("mcmillan saddle at eps = 0.01 has the closed-form location and multiplier") {
    PrecisionScope scope(60);
    Real eps = Real(1) / 100;
    auto s = mcmillan(eps, 60).saddle;
    CHECK(abs(s.point(0) + Real(1) / 10) < ten_pow<Real>(-60));
    CHECK(abs(s.point(1)) < ten_pow<Real>(-60));
    Real closed = 1 + sqrt(eps) + sqrt(2 * sqrt(eps) + eps);
    CHECK(abs(s.lambda - closed) < ten_pow<Real>(-50));
    CHECK(abs(s.lambda * (s.jacobian.determinant() / s.lambda) - 1) < ten_pow<Real>(-60));
    CHECK(s.unstable(0) > 0);
    CHECK(s.stable(0) > 0);
}

TEST_CASE("manifold parametrizations satisfy the conjugacy at random times") {
    const int digits = 60;
    PrecisionScope scope(digits);
    Real delta = Real(35) / 100;
    Real eps = pow(delta, 4);
    auto s = mcmillan(eps, digits);
    Real s0 = abs(s.saddle.point(0)) / 4;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-8.0, 4.0);
    for (auto kind : {ManifoldKind::unstable, ManifoldKind::stable}) {
        auto par = parametrize_manifold(s.map, s.saddle, kind, s0, 110, working_tolerance<Real>(digits));
        CHECK(par.r_v > 0);
        for (int i = 0; i < 20; ++i) {
            Real t(dist(rng));
            if (kind == ManifoldKind::stable) t = -t;
            Real r = conjugacy_residual(par, t);
            CHECK(r < ten_pow<Real>(1 - digits));
        }
        auto a = evaluate_manifold(par, Real(1));
        auto b = evaluate_manifold(par, Real(1), 2);
        CHECK(abs(a.value(0) - b.value(0)) + abs(a.value(1) - b.value(1)) < ten_pow<Real>(1 - digits));
        CHECK(abs(a.derivative(0) - b.derivative(0)) < ten_pow<Real>(1 - digits));
    }
}

TEST_CASE("multiplier approaches sqrt(2) delta with an O(delta^3) gap") {
    PrecisionScope scope(60);
    std::vector<double> ratio;
    for (int k : {1, 2, 3}) {
        Real delta = Real(k) / 10;
        auto s = mcmillan(pow(delta, 4), 60).saddle;
        ratio.push_back(to_double(abs(s.log_lambda - sqrt(Real(2)) * delta) / pow(delta, 3)));
    }
    for (std::size_t i = 1; i < ratio.size(); ++i) {
        CHECK(ratio[i] / ratio[i - 1] < 2.0);
        CHECK(ratio[i - 1] / ratio[i] < 2.0);
    }
}

TEST_CASE("find_saddle rejects a non-positive parameter") {
    PrecisionScope scope(30);
    MapFamily m = load_map("builtin:mcmillan");
    NumericMap<Real> nm(m, Real(-1) / 100);
    CHECK_THROWS_AS(find_saddle(nm, Real(-1) / 100, Real(1), Real(1), working_tolerance<Real>(30)), ConvergenceError);
}

TEST_CASE("inverse map undoes the map") {
    PrecisionScope scope(50);
    MapFamily m = load_map("builtin:henon");
    NumericMap<Real> nm(m, Real(1) / 50);
    Vec2<Real> p(Real(3) / 100, Real(-1) / 70);
    Vec2<Real> back = nm.inverse(nm(p), working_tolerance<Real>(50));
    CHECK(abs(back(0) - p(0)) + abs(back(1) - p(1)) < ten_pow<Real>(-55));
    // area preservation of the Jacobian
    CHECK(abs(nm.jacobian(p).determinant() - 1) < ten_pow<Real>(-55));
}

TEST_CASE("manifolds tend to the saddle and truncation changes nothing at working precision") {
    const int digits = 50;
    PrecisionScope scope(digits);
    Real delta = Real(3) / 10;
    auto s = mcmillan(pow(delta, 4), digits);
    Real s0 = abs(s.saddle.point(0)) / 4;
    auto tol = working_tolerance<Real>(digits);
    auto a = parametrize_manifold(s.map, s.saddle, ManifoldKind::unstable, s0, 95, tol);
    auto b = parametrize_manifold(s.map, s.saddle, ManifoldKind::unstable, s0, 190, tol);
    auto far = evaluate_manifold(a, Real(-40));
    CHECK(abs(far.value(0) - s.saddle.point(0)) + abs(far.value(1) - s.saddle.point(1)) < ten_pow<Real>(-15));
    for (double t : {-3.0, 0.5, 2.0, 4.0}) {
        auto pa = evaluate_manifold(a, Real(t)), pb = evaluate_manifold(b, Real(t));
        CHECK(abs(pa.value(0) - pb.value(0)) + abs(pa.value(1) - pb.value(1)) < ten_pow<Real>(1 - digits));
    }
    // c1 is aligned with the eigenvector and has length s0
    CHECK(abs(a.c[1].norm() - s0) < ten_pow<Real>(-digits));
    CHECK(abs(cross<Real>(a.c[1], s.saddle.unstable)) < ten_pow<Real>(-digits));
}

TEST_CASE("manifold derivative matches the series derivative in double precision") {
    MapFamily m = load_map("builtin:mcmillan");
    double delta = 0.4, eps = std::pow(delta, 4);
    NumericMap<double> nm(m, eps);
    auto s = find_saddle(nm, eps, 1.0, 1.0, 1e-15);
    auto par = parametrize_manifold(nm, s, ManifoldKind::unstable, std::abs(s.point(0)) / 4, 40, 1e-16);
    // derivative along the orbit obeys psi'(t + L) = DF psi'(t)
    auto p = evaluate_manifold(par, 1.0);
    auto q = evaluate_manifold(par, 1.0 + s.log_lambda);
    Vec2<double> pushed = nm.jacobian(p.value) * p.derivative;
    CHECK(std::abs(pushed(0) - q.derivative(0)) < 1e-12);
    CHECK(std::abs(pushed(1) - q.derivative(1)) < 1e-12);
}
