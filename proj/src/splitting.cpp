#include "separatrix/splitting.hpp"

#include <charconv>
#include <cmath>

namespace separatrix {

namespace {

Real exact_decimal(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return Real(std::string(buf, res.ptr));
}

double formal_mu(const FormalPipeline& fp, double delta) {
    double beta = 0, pw = delta * delta;
    for (std::size_t k = 1; k < fp.original.beta.size(); ++k, pw *= delta * delta)
        beta += fp.original.beta[k].to_double() * pw;
    return std::sqrt(2 * beta);
}

int formal_span(const FormalPipeline& fp) { return 2 * fp.order + 1; }

Real vec_norm(const Vec2<Real>& v) { return sqrt(v(0) * v(0) + v(1) * v(1)); }

}  // namespace

int splitting_digits(const FormalPipeline& fp, double delta, const SplittingConfig& cfg) {
    if (cfg.digits > 0) return cfg.digits;
    return cfg.policy.digits_for(formal_mu(fp, delta));
}

SplittingContext build_context(const FormalPipeline& fp, const Real& delta, int digits, const SplittingConfig& cfg) {
    Real eps = pow(delta, 4);
    Real tol = working_tolerance<Real>(digits);
    Real a = to_scalar<Real>(fp.mechanical.a());
    Real b = to_scalar<Real>(fp.mechanical.b());
    NumericMap<Real> nm(fp.map, eps);
    SaddleData<Real> saddle = find_saddle(nm, eps, a, b, tol);
    Real s0 = Real(cfg.s0_fraction) * vec_norm(saddle.point);
    int j_max = cfg.j_max > 0 ? cfg.j_max : static_cast<int>(std::ceil(1.5 * digits)) + 20;
    auto un = parametrize_manifold(nm, saddle, ManifoldKind::unstable, s0, j_max, tol);
    auto st = parametrize_manifold(nm, saddle, ManifoldKind::stable, s0, j_max, tol);
    FormalEvaluator<Real> fe(fp.original, delta, formal_span(fp), formal_span(fp));
    Real shift_u = log(vec_norm(fe.tail(-1)) / s0);
    Real shift_s = log(vec_norm(fe.tail(1)) / s0);
    return {nm, saddle, un, st, shift_u, shift_s, fe.mu(), digits};
}

std::vector<HomoclinicPoint<Real>> locate_homoclinics(const FormalPipeline& fp, const SplittingContext& ctx,
                                                      const SplittingConfig& cfg) {
    HomoclinicOptions<Real> opt;
    opt.samples = cfg.samples;
    if (cfg.use_reversor && fp.map.reversor) {
        const auto& r = *fp.map.reversor;
        Mat2<Real> R;
        R << Real(r[0]), Real(r[1]), Real(r[2]), Real(r[3]);
        opt.mode = SeedMode::reversor;
        opt.reversor = R;
    }
    Real offset = ctx.shift_unstable + ctx.shift_stable;
    auto match = [&](const Real& t2) { return t2 - offset; };
    return find_homoclinics(ctx.unstable, ctx.stable, ctx.shift_unstable, match,
                            ten_pow<Real>(20 - ctx.digits), opt);
}

Real normalize_amplitude(const Real& omega, const Real& log_lambda) {
    Real pi = pi_value<Real>();
    return abs(omega) * log_lambda * log_lambda * exp(2 * pi * pi / log_lambda) / (2 * pi);
}

namespace {

SplittingRecord compute_at(const FormalPipeline& fp, const Real& delta, int digits, const SplittingConfig& cfg) {
    SplittingContext ctx = build_context(fp, delta, digits, cfg);
    auto hom = locate_homoclinics(fp, ctx, cfg);
    SplittingRecord rec;
    rec.delta = delta;
    rec.eps = pow(delta, 4);
    rec.lambda = ctx.saddle.lambda;
    rec.log_lambda = ctx.saddle.log_lambda;
    rec.saddle = ctx.saddle.point;
    rec.digits = digits;
    rec.j_max = ctx.unstable.order();
    rec.mu_formal = ctx.mu_formal;
    rec.seed_mode = cfg.use_reversor && fp.map.reversor ? "reversor" : "generic";
    Real floor = ten_pow<Real>(30 - digits);
    for (const auto& h : hom) {
        if (abs(h.omega) < floor) throw PrecisionError("homoclinic invariant below the numeric floor; raise --digits");
        rec.orbits.push_back({h.t1, h.t2, h.point(0), h.point(1), h.omega, h.residual});
    }
    if (hom.size() != 2)
        throw ConvergenceError("expected two primary homoclinic orbits per fundamental interval, found " +
                               std::to_string(hom.size()));
    for (const auto& h : hom) (h.omega > 0 ? rec.omega_plus : rec.omega_minus) = h.omega;
    if (!(rec.omega_plus > 0) || !(rec.omega_minus < 0))
        throw ConvergenceError("primary homoclinic invariants do not have opposite signs");
    rec.lobe_area = lobe_area(ctx.unstable, ctx.stable, hom[0], hom[1], cfg.quadrature_nodes);
    Real finer = lobe_area(ctx.unstable, ctx.stable, hom[0], hom[1], cfg.quadrature_nodes * 3 / 2);
    rec.lobe_quadrature_change = abs(finer - rec.lobe_area);
    rec.amplitude = normalize_amplitude(rec.omega_plus, rec.log_lambda);
    Real pi = pi_value<Real>();
    Real predicted = abs(rec.omega_plus) * rec.log_lambda * rec.log_lambda / (2 * pi * pi);
    rec.lobe_relation = abs(abs(rec.lobe_area) - predicted) / abs(rec.lobe_area);

    Real worst = 0;
    int n = std::max(2, cfg.conjugacy_samples);
    for (int i = 0; i < n; ++i) {
        Real u = Real(-6) + Real(7 * i) / Real(n - 1);
        Real ru = conjugacy_residual(ctx.unstable, ctx.shift_unstable + u);
        Real rs = conjugacy_residual(ctx.stable, -ctx.shift_stable - u);
        if (ru > worst) worst = ru;
        if (rs > worst) worst = rs;
    }
    rec.conjugacy_residual = worst;
    return rec;
}

}  // namespace

SplittingRecord compute_splitting(const FormalPipeline& fp, double delta, const SplittingConfig& cfg) {
    if (!(delta > 0)) throw ValidationError("delta must be positive");
    int digits = splitting_digits(fp, delta, cfg);
    for (int attempt = 0;; ++attempt) {
        try {
            PrecisionScope scope(digits);
            SplittingRecord rec = compute_at(fp, exact_decimal(delta), digits, cfg);
            rec.retries = attempt;
            return rec;
        } catch (const ConvergenceError&) {
            if (attempt > 0) throw;
        } catch (const PrecisionError&) {
            if (attempt > 0) throw;
        }
        digits += digits / 2;
    }
}

std::vector<TraceRow> splitting_trace(const FormalPipeline& fp, double delta, const SplittingConfig& cfg, int points) {
    int digits = splitting_digits(fp, delta, cfg);
    PrecisionScope scope(digits);
    SplittingContext ctx = build_context(fp, exact_decimal(delta), digits, cfg);
    auto hom = locate_homoclinics(fp, ctx, cfg);
    if (hom.size() < 2) throw ConvergenceError("trace needs two homoclinic points");
    std::vector<TraceRow> rows;
    for (int i = 0; i < points; ++i) {
        Real s = Real(i) / Real(std::max(1, points - 1));
        Real tu = hom[0].t2 + s * (hom[1].t2 - hom[0].t2);
        Real ts = hom[0].t1 + s * (hom[1].t1 - hom[0].t1);
        auto u = evaluate_manifold(ctx.unstable, tu);
        auto v = evaluate_manifold(ctx.stable, ts);
        rows.push_back({"unstable", tu, u.value(0), u.value(1)});
        rows.push_back({"stable", ts, v.value(0), v.value(1)});
    }
    return rows;
}

Real separatrix_deviation(const FormalPipeline& fp, double delta, int n, double t_lo, double t_hi, int samples,
                          int digits) {
    if (2 * fp.order < n + 2) throw FormalError("formal separatrix order too low for X^" + std::to_string(n));
    PrecisionScope scope(digits);
    SplittingConfig cfg;
    Real d = exact_decimal(delta);
    SplittingContext ctx = build_context(fp, d, digits, cfg);
    FormalEvaluator<Real> fe(fp.original, d, n + 1, n + 2);
    Real shift = log(vec_norm(fe.tail(-1)) / (Real(cfg.s0_fraction) * vec_norm(ctx.saddle.point)));
    Real sup = 0;
    for (int i = 0; i < samples; ++i) {
        Real t = Real(t_lo) + (Real(t_hi) - Real(t_lo)) * Real(i) / Real(samples - 1);
        Real e = abs(evaluate_manifold(ctx.unstable, t + shift).value(0) - fe(t).first(0));
        if (e > sup) sup = e;
    }
    return sup;
}

nlohmann::json to_json(const SplittingRecord& r) {
    int d = r.digits;
    auto s = [d](const Real& v) { return decimal(v, d); };
    nlohmann::json orbits = nlohmann::json::array();
    for (const auto& o : r.orbits)
        orbits.push_back({{"t1", s(o.t1)}, {"t2", s(o.t2)}, {"x", s(o.x)}, {"y", s(o.y)}, {"omega", s(o.omega)},
                          {"residual", decimal(o.residual, 6)}});
    return {{"delta", s(r.delta)},
            {"eps", s(r.eps)},
            {"lambda", s(r.lambda)},
            {"log_lambda", s(r.log_lambda)},
            {"mu_formal", s(r.mu_formal)},
            {"saddle", {s(r.saddle(0)), s(r.saddle(1))}},
            {"orbits", orbits},
            {"omega_plus", s(r.omega_plus)},
            {"omega_minus", s(r.omega_minus)},
            {"lobe_area", s(r.lobe_area)},
            {"amplitude", s(r.amplitude)},
            {"diagnostics",
             {{"lobe_quadrature_change", decimal(r.lobe_quadrature_change, 6)},
              {"lobe_relation", decimal(r.lobe_relation, 6)},
              {"conjugacy_residual", decimal(r.conjugacy_residual, 6)},
              {"series_order", r.j_max},
              {"precision_retries", r.retries},
              {"seed_mode", r.seed_mode}}},
            {"digits", r.digits}};
}

}  // namespace separatrix
