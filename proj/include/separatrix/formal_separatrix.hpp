#pragma once

#include "separatrix/eta.hpp"
#include "separatrix/interpolator.hpp"

namespace separatrix {

struct FormalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Potential coefficients u_km of y^2/2 + sum u_km x^k eps^m.
struct Potential {
    std::map<std::pair<int, int>, Coefficient> u;
    /// Largest k + 2m for which all coefficients are known.
    int weight = 0;
    Coefficient at(int k, int m) const;
};

Potential extract_potential(const FormalHamiltonian& mechanical);

struct BaseOrder {
    Coefficient b0;
    Coefficient b0_alternative;  // the other root, kept for diagnostics
    Coefficient b1;
    Coefficient a1;
    Coefficient c3;
};

BaseOrder solve_base_order(const Coefficient& u30, const Coefficient& u11);

struct FormalSeparatrixData {
    Potential potential;
    std::vector<EtaCoeffs> x;       // x[k] for k >= 1, x[0] unused
    std::vector<Coefficient> a;     // a[k] for k >= 1, a[0] = 0
    std::map<int, Coefficient> c;   // c[k] for k >= 3
    BaseOrder base;
    Coefficient A;                  // 3 u30 b1 b0

    int order() const { return static_cast<int>(x.size()) - 1; }
    /// d x_k / dt = eta1 * x_k'(eta0)
    EtaPolynomial xdot(int k) const { return EtaPolynomial({}, poly_derivative(x.at(k))); }
};

FormalSeparatrixData start_separatrix(const Potential& u);
void solve_order_n(FormalSeparatrixData& state, int n);
FormalSeparatrixData solve_formal_separatrix(const Potential& u, int N);

/// Coefficients of delta^{2j}, j = 0..J, of beta*xdot^2 + U(x, eps) - c as eta0-polynomials.
std::vector<EtaCoeffs> squared_residual(const FormalSeparatrixData& state, int J);

/// A + mu B with A, B series in delta^2 of eta-polynomials and mu^2 = 2 beta(delta^2).
struct MuSeries {
    std::vector<EtaPolynomial> A;  // A[j] multiplies delta^{2j}
    std::vector<EtaPolynomial> B;  // B[j] multiplies mu delta^{2j}
};

class MuAlgebra {
public:
    MuAlgebra(std::vector<Coefficient> beta, int J) : beta_(std::move(beta)), J_(J) {}
    int truncation() const { return J_; }
    const std::vector<Coefficient>& beta() const { return beta_; }
    MuSeries zero() const;
    MuSeries one() const;
    MuSeries add(const MuSeries& a, const MuSeries& b) const;
    MuSeries scale(const MuSeries& a, const Coefficient& c) const;
    MuSeries mul(const MuSeries& a, const MuSeries& b) const;

private:
    std::vector<Coefficient> beta_;
    int J_;
};

/// Separatrix as (x, y) components; order N means x_k, a_k known for k <= N.
struct FormalSeparatrix {
    MuSeries x;
    MuSeries y;
    std::vector<Coefficient> beta;
    int order = 0;
};

/// Mechanical separatrix x = sum delta^{2k} x_k, y = mu xdot.
FormalSeparatrix assemble(const FormalSeparatrixData& state, int N);

/// X = exp(L_chi_N) ... exp(L_chi_6) applied to the mechanical separatrix.
FormalSeparatrix invert_change(const FormalSeparatrixData& state, const std::vector<QhPolynomial>& log, int N);

/// Eta-Laurent data at t = i*pi: eta0 = sum E_r s^{2r-2}, eta1 = sum F_r s^{2r-3}, s = t - i*pi.
struct EtaLaurent {
    std::vector<Coefficient> E;
    std::vector<Coefficient> F;
};
const EtaLaurent& eta_laurent(int r_max);

struct LaurentTable {
    int m_max = 0;
    int k_max = 0;
    /// x[m][k] multiplies delta^{2m} tau^{2m-2-k}; y[m][k] multiplies delta^{2m} tau^{2m-3-k}.
    std::vector<std::vector<Coefficient>> x;
    std::vector<std::vector<Coefficient>> y;
};

LaurentTable laurent_reexpand(const FormalSeparatrix& sep, int m_max, int k_max);

/// End-to-end exact pipeline for a family.
struct FormalPipeline {
    MapFamily map;  // sign-normalized
    SignNormalization signs;
    FormalHamiltonian raw;
    FormalHamiltonian mechanical;
    FormalSeparatrixData data;
    FormalSeparatrix original;
    int order = 0;
};

FormalPipeline build_formal_pipeline(const MapFamily& map, int N);

nlohmann::json eta_to_json(const EtaPolynomial& p);
nlohmann::json to_json(const FormalSeparatrixData& d);
nlohmann::json to_json(const FormalSeparatrix& s);
nlohmann::json to_json(const LaurentTable& t);

}  // namespace separatrix
