#pragma once

#include "separatrix/formal_eval.hpp"
#include "separatrix/homoclinic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace separatrix {

struct SplittingConfig {
    int order = 4;            // interpolation order n; the formal separatrix used for phases has order ceil(n/2)
    int digits = 0;           // 0 selects the precision policy
    PrecisionPolicy policy;
    int samples = 8;
    bool use_reversor = false;
    int quadrature_nodes = 64;
    int j_max = 0;            // 0 selects ceil(1.5 D) + 20
    double s0_fraction = 0.25;  // s0 as a fraction of |p_delta|
    int conjugacy_samples = 10;
};

struct OrbitRecord {
    Real t1;
    Real t2;
    Real x;
    Real y;
    Real omega;
    Real residual;
};

struct SplittingRecord {
    Real delta;
    Real eps;
    Real lambda;
    Real log_lambda;
    Vec2<Real> saddle;
    std::vector<OrbitRecord> orbits;
    Real omega_plus;
    Real omega_minus;
    Real lobe_area;
    Real lobe_quadrature_change;
    Real amplitude;        // normalized w(delta) from |omega_plus|
    Real lobe_relation;    // |A - |omega| log^2(lambda) / (2 pi^2)| / |A|
    Real conjugacy_residual;
    Real mu_formal;
    int digits = 0;
    int j_max = 0;
    int retries = 0;
    std::string seed_mode;
};

/// Working digits for a given delta under the policy, using the formal mu as log lambda estimate.
int splitting_digits(const FormalPipeline& fp, double delta, const SplittingConfig& cfg);

/// All numeric objects for one delta, built inside the caller's PrecisionScope.
struct SplittingContext {
    NumericMap<Real> map;
    SaddleData<Real> saddle;
    ManifoldParametrization<Real> unstable;
    ManifoldParametrization<Real> stable;
    Real shift_unstable;  // psi^-(t + shift) ~ X(t)
    Real shift_stable;    // psi^+(t - shift) ~ X(t)
    Real mu_formal;
    int digits = 0;
};

SplittingContext build_context(const FormalPipeline& fp, const Real& delta, int digits, const SplittingConfig& cfg);

std::vector<HomoclinicPoint<Real>> locate_homoclinics(const FormalPipeline& fp, const SplittingContext& ctx,
                                                      const SplittingConfig& cfg);

SplittingRecord compute_splitting(const FormalPipeline& fp, double delta, const SplittingConfig& cfg);

/// (t, x, y) rows along the unstable and stable lobe boundaries.
struct TraceRow {
    std::string branch;
    Real t;
    Real x;
    Real y;
};
std::vector<TraceRow> splitting_trace(const FormalPipeline& fp, double delta, const SplittingConfig& cfg, int points);

/// w = |omega| log^2(lambda) e^{2 pi^2 / log lambda} / (2 pi).
Real normalize_amplitude(const Real& omega, const Real& log_lambda);

nlohmann::json to_json(const SplittingRecord& r);

/// Sup over t in [t_lo, t_hi] of |psi^-(t + shift) - X^n(t)| for the x component (unscaled), n >= 1.
Real separatrix_deviation(const FormalPipeline& fp, double delta, int n, double t_lo, double t_hi, int samples,
                          int digits);

}  // namespace separatrix
