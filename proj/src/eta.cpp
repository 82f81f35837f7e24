#include "separatrix/eta.hpp"

namespace separatrix {

void trim(EtaCoeffs& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

EtaCoeffs poly_add(const EtaCoeffs& a, const EtaCoeffs& b) {
    EtaCoeffs out(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    trim(out);
    return out;
}

EtaCoeffs poly_sub(const EtaCoeffs& a, const EtaCoeffs& b) { return poly_add(a, poly_scale(b, Coefficient(-1))); }

EtaCoeffs poly_mul(const EtaCoeffs& a, const EtaCoeffs& b) {
    if (a.empty() || b.empty()) return {};
    EtaCoeffs out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!b[j].is_zero()) out[i + j] += a[i] * b[j];
    }
    trim(out);
    return out;
}

EtaCoeffs poly_scale(const EtaCoeffs& a, const Coefficient& c) {
    if (c.is_zero()) return {};
    EtaCoeffs out = a;
    for (auto& v : out) v *= c;
    return out;
}

EtaCoeffs poly_derivative(const EtaCoeffs& a) {
    EtaCoeffs out;
    for (std::size_t i = 1; i < a.size(); ++i) out.push_back(a[i] * Coefficient(static_cast<long>(i)));
    trim(out);
    return out;
}

int poly_degree(const EtaCoeffs& a) {
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
        if (!a[i].is_zero()) return i;
    return -1;
}

namespace {

// eta1^2 = eta0^2 - eta0^3
const EtaCoeffs& eta1_squared() {
    static const EtaCoeffs v{Coefficient(0), Coefficient(0), Coefficient(1), Coefficient(-1)};
    return v;
}

}  // namespace

EtaPolynomial::EtaPolynomial(EtaCoeffs p, EtaCoeffs q) : p_(std::move(p)), q_(std::move(q)) {
    trim(p_);
    trim(q_);
}

EtaPolynomial& EtaPolynomial::operator+=(const EtaPolynomial& o) {
    p_ = poly_add(p_, o.p_);
    q_ = poly_add(q_, o.q_);
    return *this;
}

EtaPolynomial& EtaPolynomial::operator-=(const EtaPolynomial& o) {
    p_ = poly_sub(p_, o.p_);
    q_ = poly_sub(q_, o.q_);
    return *this;
}

EtaPolynomial& EtaPolynomial::operator*=(const Coefficient& c) {
    p_ = poly_scale(p_, c);
    q_ = poly_scale(q_, c);
    return *this;
}

EtaPolynomial operator*(const EtaPolynomial& a, const EtaPolynomial& b) {
    EtaCoeffs p = poly_add(poly_mul(a.p_, b.p_), poly_mul(eta1_squared(), poly_mul(a.q_, b.q_)));
    EtaCoeffs q = poly_add(poly_mul(a.p_, b.q_), poly_mul(a.q_, b.p_));
    return EtaPolynomial(std::move(p), std::move(q));
}

EtaPolynomial eta_reduce(const RawEtaPolynomial& raw) {
    EtaPolynomial out;
    for (const auto& [pw, c] : raw) {
        auto [i, e] = pw;
        if (i < 0 || e < 0) throw std::invalid_argument("eta_reduce: negative power");
        EtaCoeffs mono(i + 1);
        mono[i] = c;
        EtaCoeffs factor{Coefficient(1)};
        for (int r = 0; r < e / 2; ++r) factor = poly_mul(factor, eta1_squared());
        EtaCoeffs part = poly_mul(mono, factor);
        out += e % 2 ? EtaPolynomial({}, part) : EtaPolynomial(part);
    }
    return out;
}

EtaPolynomial eta_derivative(const EtaPolynomial& p) {
    // d/dt [P + eta1 Q] = P' eta1 + (eta0 - 3/2 eta0^2) Q + eta1^2 Q'
    static const EtaCoeffs deta1{Coefficient(0), Coefficient(1), Coefficient(Rational(-3, 2))};
    EtaCoeffs np = poly_add(poly_mul(deta1, p.Q()), poly_mul(eta1_squared(), poly_derivative(p.Q())));
    return EtaPolynomial(np, poly_derivative(p.P()));
}

}  // namespace separatrix
