#include "separatrix/verify.hpp"

#include "separatrix/eta.hpp"
#include "separatrix/qh_series.hpp"

#include <functional>
#include <random>
#include <stdexcept>

namespace separatrix {

namespace {

class Gen {
public:
    explicit Gen(unsigned seed) : rng_(seed) {}

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    Coefficient coefficient(bool allow_root) {
        Rational p(uniform(-9, 9), uniform(1, 6));
        if (allow_root && uniform(0, 3) == 0) return Coefficient(p, Rational(uniform(-5, 5), uniform(1, 4)), 2);
        return Coefficient(p);
    }

    QhPolynomial qh(int order, bool allow_root) {
        QhPolynomial out(order);
        for (int m = 0; 4 * m <= order; ++m)
            for (int l = 0; 4 * m + 3 * l <= order; ++l) {
                int rest = order - 4 * m - 3 * l;
                if (rest % 2 || uniform(0, 2) == 0) continue;
                out.add_term({rest / 2, l, m}, coefficient(allow_root));
            }
        return out;
    }

    EtaCoeffs coeffs(int max_degree) {
        EtaCoeffs c(uniform(0, max_degree + 1));
        for (auto& v : c) v = coefficient(false);
        trim(c);
        return c;
    }

    EtaPolynomial eta(int max_degree) { return EtaPolynomial(coeffs(max_degree), coeffs(max_degree)); }

    RawEtaPolynomial raw(int max_degree) {
        RawEtaPolynomial r;
        for (int i = 0; i <= max_degree; ++i)
            for (int j = 0; j <= 3; ++j)
                if (uniform(0, 2) == 0) r[{i, j}] = coefficient(false);
        return r;
    }

private:
    std::mt19937 rng_;
};

bool orders_are(const QhPolynomial& p, int order) {
    for (const auto& [t, c] : p.terms())
        if (qh_order(t) != order) return false;
    return p.is_zero() || p.order() == order;
}

RawEtaPolynomial as_raw(const EtaPolynomial& p) {
    RawEtaPolynomial r;
    for (std::size_t i = 0; i < p.P().size(); ++i)
        if (!p.P()[i].is_zero()) r[{static_cast<int>(i), 0}] = p.P()[i];
    for (std::size_t i = 0; i < p.Q().size(); ++i)
        if (!p.Q()[i].is_zero()) r[{static_cast<int>(i), 1}] = p.Q()[i];
    return r;
}

RawEtaPolynomial raw_product(const RawEtaPolynomial& a, const RawEtaPolynomial& b) {
    RawEtaPolynomial r;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) r[{ea.first + eb.first, ea.second + eb.second}] += ca * cb;
    return r;
}

using Check = std::function<bool(Gen&)>;

void run(SuiteReport& rep, const std::string& name, int cases, Gen& gen, const Check& check) {
    PropertyResult res{name, cases, 0, {}};
    for (int i = 0; i < cases; ++i) {
        bool ok = false;
        try {
            ok = check(gen);
        } catch (const std::exception& e) {
            if (res.first_failure.empty()) res.first_failure = e.what();
        }
        if (!ok) {
            ++res.failures;
            if (res.first_failure.empty()) res.first_failure = "case " + std::to_string(i);
        }
    }
    rep.properties.push_back(res);
}

void algebra_suite(SuiteReport& rep, int cases, Gen& gen) {
    run(rep, "bracket antisymmetry", cases, gen, [](Gen& g) {
        auto f = g.qh(g.uniform(4, 12), true), h = g.qh(g.uniform(4, 12), true);
        QhPolynomial s = poisson(f, h);
        s += poisson(h, f);
        return s.is_zero();
    });
    run(rep, "Jacobi identity", cases, gen, [](Gen& g) {
        auto a = g.qh(g.uniform(4, 10), false), b = g.qh(g.uniform(4, 10), false), c = g.qh(g.uniform(4, 10), false);
        QhPolynomial s = poisson(a, poisson(b, c));
        s += poisson(b, poisson(c, a));
        s += poisson(c, poisson(a, b));
        return s.is_zero();
    });
    run(rep, "Leibniz rule", cases, gen, [](Gen& g) {
        auto a = g.qh(g.uniform(4, 10), true), b = g.qh(g.uniform(2, 8), true), c = g.qh(g.uniform(2, 8), true);
        QhPolynomial lhs = poisson(a, b * c);
        QhPolynomial rhs = poisson(a, b) * c;
        rhs += b * poisson(a, c);
        lhs -= rhs;
        return lhs.is_zero();
    });
    run(rep, "bracket grading", cases, gen, [](Gen& g) {
        int p = g.uniform(4, 14), q = g.uniform(4, 14);
        return orders_are(poisson(g.qh(p, true), g.qh(q, true)), p + q - 5);
    });
    run(rep, "product grading", cases, gen, [](Gen& g) {
        int p = g.uniform(2, 12), q = g.uniform(2, 12);
        return orders_are(g.qh(p, true) * g.qh(q, true), p + q);
    });
    run(rep, "Lie series inverse", cases / 10 + 1, gen, [](Gen& g) {
        QhSeries chi, f;
        chi.set_part(g.qh(g.uniform(6, 8), false));
        f.set_part(g.qh(g.uniform(2, 6), false));
        int top = 14;
        QhSeries back = lie_exp(chi * Coefficient(-1), lie_exp(chi, f, top), top);
        return back.truncated(top) == f.truncated(top);
    });
}

void eta_suite(SuiteReport& rep, int cases, Gen& gen) {
    run(rep, "reduction idempotence", cases, gen, [](Gen& g) {
        EtaPolynomial once = eta_reduce(g.raw(4));
        return eta_reduce(as_raw(once)) == once;
    });
    run(rep, "reduction is multiplicative", cases, gen, [](Gen& g) {
        auto a = g.raw(3), b = g.raw(3);
        return eta_reduce(raw_product(a, b)) == eta_reduce(a) * eta_reduce(b);
    });
    run(rep, "product commutes", cases, gen, [](Gen& g) {
        auto a = g.eta(4), b = g.eta(4);
        return a * b == b * a;
    });
    run(rep, "product associates", cases, gen, [](Gen& g) {
        auto a = g.eta(3), b = g.eta(3), c = g.eta(3);
        return (a * b) * c == a * (b * c);
    });
    run(rep, "derivation Leibniz", cases, gen, [](Gen& g) {
        auto a = g.eta(4), b = g.eta(4);
        return eta_derivative(a * b) == eta_derivative(a) * b + a * eta_derivative(b);
    });
    run(rep, "derivation parity", cases, gen, [](Gen& g) {
        // d/dt swaps the even part P and the odd part eta1 Q
        EtaPolynomial p(g.coeffs(5)), q({}, g.coeffs(5));
        auto dp = eta_derivative(p), dq = eta_derivative(q);
        return dp.P().empty() && dq.Q().empty();
    });
}

}  // namespace

std::vector<std::string> suite_names() { return {"algebra", "eta"}; }

SuiteReport run_suite(const std::string& suite, int cases, unsigned seed) {
    if (cases <= 0) throw std::invalid_argument("case count must be positive");
    SuiteReport rep;
    rep.suite = suite;
    rep.seed = seed;
    Gen gen(seed);
    if (suite == "algebra")
        algebra_suite(rep, cases, gen);
    else if (suite == "eta")
        eta_suite(rep, cases, gen);
    else
        throw std::invalid_argument("unknown suite: " + suite);
    return rep;
}

}  // namespace separatrix
