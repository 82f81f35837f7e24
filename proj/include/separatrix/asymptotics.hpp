#pragma once

#include "separatrix/real.hpp"

#include <string>
#include <utility>
#include <vector>

namespace separatrix {

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Least-squares fit of w(delta) = sum_{k<=K} a_k delta^{2k}.
struct AsymptoticFit {
    int K = 0;
    std::vector<Real> coefficients;  // a_0 .. a_K in powers of delta^2
    Real residual_norm;
    /// a_0 from leave-one-out sub-grids.
    std::vector<Real> a0_subgrids;
    Real a0_spread;  // (max - min) / |a_0| over sub-grids
};

/// Fit in centered, scaled delta^2 to keep the Vandermonde system conditioned.
AsymptoticFit fit_even_series(const std::vector<std::pair<Real, Real>>& points, int K);

struct RegressionResult {
    double claimed = 0;
    double slope = 0;
    double slope_error = 0;  // standard error of the slope
    bool pass = false;
    std::vector<std::size_t> excluded;  // indices below the error floor
};

/// Log-log slope of err against delta; passes iff slope >= claimed - 0.25.
RegressionResult order_regression(const std::vector<std::pair<double, double>>& pairs, double claimed,
                                  double floor = 0);

/// "geom:a:b:n", "lin:a:b:n" or "list:v1,v2,...".
std::vector<double> parse_grid(const std::string& text);

}  // namespace separatrix
