#pragma once

#include "separatrix/coefficient.hpp"

#include <map>
#include <vector>

namespace separatrix {

/// Polynomial in eta0 with exact coefficients, index = power.
using EtaCoeffs = std::vector<Coefficient>;

void trim(EtaCoeffs& p);
EtaCoeffs poly_add(const EtaCoeffs& a, const EtaCoeffs& b);
EtaCoeffs poly_sub(const EtaCoeffs& a, const EtaCoeffs& b);
EtaCoeffs poly_mul(const EtaCoeffs& a, const EtaCoeffs& b);
EtaCoeffs poly_scale(const EtaCoeffs& a, const Coefficient& c);
EtaCoeffs poly_derivative(const EtaCoeffs& a);
/// Degree, -1 for the zero polynomial.
int poly_degree(const EtaCoeffs& a);

/// P(eta0) + eta1 Q(eta0) with eta0 = cosh^-2(t/2), eta1 = d eta0/dt; eta1^2 = eta0^2 - eta0^3.
class EtaPolynomial {
public:
    EtaPolynomial() = default;
    EtaPolynomial(EtaCoeffs p, EtaCoeffs q = {});
    static EtaPolynomial constant(const Coefficient& c) { return EtaPolynomial({c}); }
    static EtaPolynomial eta0() { return EtaPolynomial({Coefficient(0), Coefficient(1)}); }
    static EtaPolynomial eta1() { return EtaPolynomial({}, {Coefficient(1)}); }

    const EtaCoeffs& P() const { return p_; }
    const EtaCoeffs& Q() const { return q_; }
    bool is_zero() const { return p_.empty() && q_.empty(); }

    EtaPolynomial& operator+=(const EtaPolynomial& o);
    EtaPolynomial& operator-=(const EtaPolynomial& o);
    EtaPolynomial& operator*=(const Coefficient& c);
    friend EtaPolynomial operator+(EtaPolynomial a, const EtaPolynomial& b) { return a += b; }
    friend EtaPolynomial operator-(EtaPolynomial a, const EtaPolynomial& b) { return a -= b; }
    friend EtaPolynomial operator*(EtaPolynomial a, const Coefficient& c) { return a *= c; }
    friend EtaPolynomial operator*(const EtaPolynomial& a, const EtaPolynomial& b);
    friend bool operator==(const EtaPolynomial&, const EtaPolynomial&) = default;

private:
    EtaCoeffs p_;
    EtaCoeffs q_;
};

/// Unreduced polynomial in (eta0, eta1): (power of eta0, power of eta1) -> coefficient.
using RawEtaPolynomial = std::map<std::pair<int, int>, Coefficient>;

EtaPolynomial eta_reduce(const RawEtaPolynomial& p);
/// Time derivative: d eta0 = eta1, d eta1 = eta0 - (3/2) eta0^2.
EtaPolynomial eta_derivative(const EtaPolynomial& p);

/// eta0(t), eta1(t) for real t.
template <class S>
std::pair<S, S> eta_values(const S& t) {
    using std::cosh;
    using std::sinh;
    S c = cosh(t / 2);
    S e0 = 1 / (c * c);
    return {e0, -sinh(t / 2) * e0 / c};
}

}  // namespace separatrix
