#pragma once

#include "separatrix/coefficient.hpp"

#include <nlohmann/json.hpp>

#include <compare>
#include <limits>
#include <map>
#include <string>

namespace separatrix {

/// Exponent triple of x^k y^l eps^m.
struct Monomial {
    int k = 0;
    int l = 0;
    int m = 0;
    auto operator<=>(const Monomial&) const = default;
};

/// Quasi-homogeneous order 2k + 3l + 4m.
int qh_order(const Monomial& t);

class QhPolynomial {
public:
    using Terms = std::map<Monomial, Coefficient>;

    explicit QhPolynomial(int order = 0) : order_(order) {}

    int order() const { return order_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Coefficient coeff(const Monomial& t) const;

    /// Adds c to the coefficient of t; t must have this polynomial's order.
    void add_term(const Monomial& t, const Coefficient& c);

    QhPolynomial& operator+=(const QhPolynomial& o);
    QhPolynomial& operator-=(const QhPolynomial& o);
    QhPolynomial& operator*=(const Coefficient& c);
    friend bool operator==(const QhPolynomial&, const QhPolynomial&) = default;

private:
    int order_;
    Terms terms_;
};

QhPolynomial operator*(const QhPolynomial& a, const QhPolynomial& b);
QhPolynomial poisson(const QhPolynomial& f, const QhPolynomial& g);

/// Truncated formal series; orders above truncation() are undefined.
class QhSeries {
public:
    static constexpr int kExact = std::numeric_limits<int>::max() / 4;
    using Parts = std::map<int, QhPolynomial>;

    explicit QhSeries(int truncation = kExact) : truncation_(truncation) {}

    static QhSeries monomial(const Monomial& t, const Coefficient& c, int truncation = kExact);
    static QhSeries x() { return monomial({1, 0, 0}, 1); }
    static QhSeries y() { return monomial({0, 1, 0}, 1); }
    static QhSeries eps() { return monomial({0, 0, 1}, 1); }

    int truncation() const { return truncation_; }
    bool is_exact() const { return truncation_ >= kExact; }
    const Parts& parts() const { return parts_; }
    const QhPolynomial& part(int p) const;
    Coefficient coeff(const Monomial& t) const;
    bool is_zero() const { return parts_.empty(); }
    /// Lowest order carrying a nonzero term; kExact for the zero series.
    int lowest_order() const;
    int highest_order() const;

    void add_term(const Monomial& t, const Coefficient& c);
    void set_part(const QhPolynomial& p);
    /// Copy with terms above n removed and truncation min(n, truncation()).
    QhSeries truncated(int n) const;
    /// Same terms, truncation marker replaced (used when a partial sum is known to be final).
    QhSeries with_truncation(int n) const;

    QhSeries& operator+=(const QhSeries& o);
    QhSeries& operator-=(const QhSeries& o);
    QhSeries& operator*=(const Coefficient& c);
    QhSeries operator-() const;
    friend QhSeries operator+(QhSeries a, const QhSeries& b) { return a += b; }
    friend QhSeries operator-(QhSeries a, const QhSeries& b) { return a -= b; }
    friend QhSeries operator*(QhSeries a, const Coefficient& c) { return a *= c; }
    friend QhSeries operator*(const Coefficient& c, QhSeries a) { return a *= c; }
    friend bool operator==(const QhSeries&, const QhSeries&) = default;

    QhSeries dx() const;
    QhSeries dy() const;
    /// Radicand of any quadratic-extension coefficient, 0 if all rational.
    long radicand() const;
    std::string to_string() const;

private:
    int truncation_;
    Parts parts_;
};

QhSeries operator*(const QhSeries& a, const QhSeries& b);

/// {f, g} = f_x g_y - f_y g_x.
QhSeries poisson(const QhSeries& f, const QhSeries& g);

/// exp(L_chi) g = sum_k (1/k!) L_chi^k g with L_chi g = {g, chi}, through target_order.
QhSeries lie_exp(const QhSeries& chi, const QhSeries& g, int target_order);

struct AreaCheck {
    bool ok = true;
    int first_failing_order = -1;
};

/// Checks f_x + g_y + {f,g} - g_x = 0 through order up_to - 2 for x1 = x+y+f, y1 = y+g.
AreaCheck validate_area_preservation(const QhSeries& f, const QhSeries& g, int up_to);

nlohmann::json to_json(const QhSeries& s);
QhSeries series_from_json(const nlohmann::json& j);
nlohmann::json coefficient_to_json(const Coefficient& c);
Coefficient coefficient_from_json(const nlohmann::json& j, long d);

}  // namespace separatrix
