#include "separatrix/coefficient.hpp"

#include <cmath>

namespace separatrix {

std::pair<Integer, Rational> squarefree_split(const Rational& r) {
    if (r <= 0) throw std::domain_error("squarefree_split: non-positive input");
    // r = n/m = n*m / m^2
    Integer n = numerator(r) * denominator(r);
    Integer square_root = 1;
    Integer rest = 1;
    for (Integer p = 2; p * p <= n; ++p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (unsigned i = 0; i < e / 2; ++i) square_root *= p;
        if (e % 2) rest *= p;
    }
    rest *= n;
    return {rest, Rational(square_root) / Rational(denominator(r))};
}

Coefficient::Coefficient(const Rational& p, const Rational& q, long d) : p_(p), q_(q), d_(d) {
    if (d_ == 0 && q_ != 0) throw ContextError("root part without a radicand");
}

Coefficient Coefficient::sqrt_of(const Rational& r) {
    if (r == 0) return Coefficient();
    auto [s, w] = squarefree_split(r);
    if (s == 1) return Coefficient(w);
    if (s > Integer(std::numeric_limits<long>::max())) throw ContextError("radicand too large");
    return Coefficient(Rational(0), w, s.convert_to<long>());
}

long Coefficient::merge_context(const Coefficient& o) const {
    if (d_ == 0) return o.d_;
    if (o.d_ == 0 || o.d_ == d_) return d_;
    if (q_ == 0 && o.q_ == 0) return d_;
    throw ContextError("mixing Q(sqrt " + std::to_string(d_) + ") with Q(sqrt " + std::to_string(o.d_) + ")");
}

int Coefficient::sign() const {
    int sp = p_ > 0 ? 1 : (p_ < 0 ? -1 : 0);
    int sq = q_ > 0 ? 1 : (q_ < 0 ? -1 : 0);
    if (sq == 0) return sp;
    if (sp == 0 || sp == sq) return sq;
    Rational lhs = p_ * p_;
    Rational rhs = q_ * q_ * d_;
    if (lhs == rhs) return 0;
    return lhs > rhs ? sp : sq;
}

Coefficient& Coefficient::operator+=(const Coefficient& o) {
    d_ = merge_context(o);
    p_ += o.p_;
    q_ += o.q_;
    return *this;
}

Coefficient& Coefficient::operator-=(const Coefficient& o) {
    d_ = merge_context(o);
    p_ -= o.p_;
    q_ -= o.q_;
    return *this;
}

Coefficient& Coefficient::operator*=(const Coefficient& o) {
    long d = merge_context(o);
    if (q_ == 0 && o.q_ == 0) {
        p_ *= o.p_;
    } else {
        Rational np = p_ * o.p_ + q_ * o.q_ * d;
        Rational nq = p_ * o.q_ + q_ * o.p_;
        p_ = std::move(np);
        q_ = std::move(nq);
    }
    d_ = d;
    return *this;
}

Coefficient& Coefficient::operator/=(const Coefficient& o) {
    if (o.is_zero()) throw std::domain_error("Coefficient: division by zero");
    long d = merge_context(o);
    if (o.q_ == 0) {
        p_ /= o.p_;
        q_ /= o.p_;
    } else {
        Rational norm = o.p_ * o.p_ - o.q_ * o.q_ * d;
        Coefficient inv(o.p_ / norm, -o.q_ / norm, d);
        *this *= inv;
    }
    d_ = d;
    return *this;
}

double Coefficient::to_double() const {
    double v = p_.convert_to<double>();
    if (q_ != 0) v += q_.convert_to<double>() * std::sqrt(static_cast<double>(d_));
    return v;
}

std::string Coefficient::to_string() const {
    if (q_ == 0) return p_.str();
    std::string s = p_ == 0 ? "" : p_.str() + (q_ > 0 ? "+" : "");
    return s + q_.str() + "*sqrt(" + std::to_string(d_) + ")";
}

Coefficient pow(const Coefficient& c, int n) {
    if (n < 0) return pow(Coefficient(1) / c, -n);
    Coefficient out(1);
    Coefficient base = c;
    while (n) {
        if (n & 1) out *= base;
        base *= base;
        n >>= 1;
    }
    return out;
}

}  // namespace separatrix
