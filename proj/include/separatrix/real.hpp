#pragma once

#include "separatrix/coefficient.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <Eigen/Dense>

#include <cmath>
#include <mutex>
#include <string>

namespace separatrix {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>, boost::multiprecision::et_off>;

template <class S>
using Vec2 = Eigen::Matrix<S, 2, 1>;
template <class S>
using Mat2 = Eigen::Matrix<S, 2, 2>;

/// Extra digits carried internally beyond the nominal working precision D.
inline constexpr int kGuardDigits = 20;

struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// D = max(base_digits, ceil(margin * 2 pi^2 / (log(lambda) ln 10)) + guard).
struct PrecisionPolicy {
    int base_digits = 30;
    double exponent_margin = 1.5;
    int guard = 50;
    int digits_for(double log_lambda) const {
        double e = 2 * M_PI * M_PI / (log_lambda * std::log(10.0));
        return std::max(base_digits, static_cast<int>(std::ceil(exponent_margin * e)) + guard);
    }
};

/// Sets the Real working precision to D + kGuardDigits for the lifetime of the scope.
/// Boost keeps one process-wide default, so scopes with different D are serialized.
class PrecisionScope {
public:
    explicit PrecisionScope(int digits) : lock_(mutex()), saved_(Real::default_precision()), digits_(digits) {
        Real::default_precision(digits + kGuardDigits);
    }
    ~PrecisionScope() { Real::default_precision(saved_); }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;
    int digits() const { return digits_; }

private:
    static std::recursive_mutex& mutex() {
        static std::recursive_mutex m;
        return m;
    }
    std::unique_lock<std::recursive_mutex> lock_;
    unsigned saved_;
    int digits_;
};

template <class S>
S to_scalar(const Rational& r) {
    if constexpr (std::is_same_v<S, double>)
        return r.convert_to<double>();
    else
        return S(r);
}

template <class S>
S to_scalar(const Coefficient& c) {
    using std::sqrt;
    S v = to_scalar<S>(c.rational_part());
    if (!c.is_rational()) v += to_scalar<S>(c.root_part()) * sqrt(S(c.radicand()));
    return v;
}

template <class S>
S pi_value() {
    if constexpr (std::is_same_v<S, double>)
        return M_PI;
    else {
        S r;
        mpfr_const_pi(r.backend().data(), MPFR_RNDN);
        return r;
    }
}

template <class S>
S ten_pow(int e) {
    using std::pow;
    return pow(S(10), e);
}

/// Stopping tolerance for inner Newton loops at nominal precision D.
template <class S>
S working_tolerance(int digits) {
    if constexpr (std::is_same_v<S, double>)
        return 1e-14;
    else
        return ten_pow<S>(-(digits + kGuardDigits - 5));
}

/// Decimal string with `digits` significant digits.
inline std::string decimal(const Real& v, int digits) { return v.str(digits, std::ios_base::scientific); }

inline double to_double(const Real& v) { return v.convert_to<double>(); }
inline double to_double(double v) { return v; }

}  // namespace separatrix
