#pragma once

#include "separatrix/numeric_map.hpp"

#include <vector>

namespace separatrix {

/// Coefficients of X(z)^a and Y(z)^b grown one order at a time, for composing
/// polynomials with power series.
template <class S>
class PowerTables {
public:
    PowerTables(int max_a, int max_b) : xp_(max_a + 1), yp_(max_b + 1) {}

    int size() const { return static_cast<int>(xp_[0].size()); }

    /// Appends order j = size() with series coefficients (x, y); powers >= 2 at order j
    /// are filled from the stored lower orders and the new entries.
    void push(const S& x, const S& y) {
        int j = size();
        xp_[0].push_back(S(j == 0 ? 1 : 0));
        yp_[0].push_back(S(j == 0 ? 1 : 0));
        if (xp_.size() > 1) xp_[1].push_back(x);
        if (yp_.size() > 1) yp_[1].push_back(y);
        extend(xp_, j);
        extend(yp_, j);
    }

    /// Overwrites the order-j linear entries; valid only when both series vanish at order 0,
    /// since then higher powers at order j do not involve them.
    void set_linear(int j, const S& x, const S& y) {
        if (xp_.size() > 1) xp_[1][j] = x;
        if (yp_.size() > 1) yp_[1][j] = y;
    }

    /// [z^j] X^a Y^b.
    S monomial(int a, int b, int j) const {
        if (b == 0) return xp_[a][j];
        if (a == 0) return yp_[b][j];
        S s(0);
        for (int i = 0; i <= j; ++i) s += xp_[a][i] * yp_[b][j - i];
        return s;
    }

    /// [z^j] p(X, Y), skipping monomials of total degree below min_degree.
    S coefficient(const Poly2<S>& p, int j, int min_degree = 0) const {
        S s(0);
        for (const auto& t : p.terms)
            if (t.i + t.j >= min_degree) s += t.c * monomial(t.i, t.j, j);
        return s;
    }

private:
    static void extend(std::vector<std::vector<S>>& tab, int j) {
        for (std::size_t a = 2; a < tab.size(); ++a) {
            S s(0);
            for (int i = 0; i <= j; ++i) s += tab[1][i] * tab[a - 1][j - i];
            tab[a].push_back(s);
        }
    }

    std::vector<std::vector<S>> xp_;
    std::vector<std::vector<S>> yp_;
};

}  // namespace separatrix
