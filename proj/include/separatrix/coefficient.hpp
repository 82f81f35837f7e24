#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <compare>
#include <stdexcept>
#include <string>

namespace separatrix {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

struct ContextError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Squarefree part s of a positive rational r, with r = s * w^2 for a rational w.
/// Returns {s, w}; s == 1 means r is a perfect square.
std::pair<Integer, Rational> squarefree_split(const Rational& r);

/// Element p + q*sqrt(d) of Q(sqrt d). d == 0 means plain rationals.
/// d is always a squarefree integer > 1 when nonzero.
class Coefficient {
public:
    Coefficient() = default;
    Coefficient(long v) : p_(v) {}
    Coefficient(const Rational& p) : p_(p) {}
    Coefficient(const Rational& p, const Rational& q, long d);

    static Coefficient fraction(long num, long den) { return Coefficient(Rational(num, den)); }
    /// sqrt(r) for rational r > 0, exact in Q(sqrt d).
    static Coefficient sqrt_of(const Rational& r);

    const Rational& rational_part() const { return p_; }
    const Rational& root_part() const { return q_; }
    long radicand() const { return d_; }
    bool is_zero() const { return p_ == 0 && q_ == 0; }
    bool is_rational() const { return q_ == 0; }
    /// -1, 0, 1 computed exactly.
    int sign() const;
    /// Conjugate p - q*sqrt(d).
    Coefficient conjugate() const { return Coefficient(p_, -q_, d_); }

    Coefficient& operator+=(const Coefficient& o);
    Coefficient& operator-=(const Coefficient& o);
    Coefficient& operator*=(const Coefficient& o);
    Coefficient& operator/=(const Coefficient& o);
    Coefficient operator-() const { return Coefficient(-p_, -q_, d_); }

    friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
    friend Coefficient operator-(Coefficient a, const Coefficient& b) { return a -= b; }
    friend Coefficient operator*(Coefficient a, const Coefficient& b) { return a *= b; }
    friend Coefficient operator/(Coefficient a, const Coefficient& b) { return a /= b; }
    friend bool operator==(const Coefficient& a, const Coefficient& b) {
        return a.p_ == b.p_ && a.q_ == b.q_ && (a.q_ == 0 || a.d_ == b.d_);
    }

    double to_double() const;
    std::string to_string() const;

private:
    long merge_context(const Coefficient& o) const;

    Rational p_{0};
    Rational q_{0};
    long d_ = 0;
};

Coefficient pow(const Coefficient& c, int n);

}  // namespace separatrix
