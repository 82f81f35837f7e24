#pragma once

#include "separatrix/map_family.hpp"

#include <map>
#include <vector>

namespace separatrix {

enum class HamiltonianForm { raw, mechanical };

struct FormalHamiltonian {
    QhSeries parts;
    /// chi_p applied in increasing p during simplification (zero entries kept).
    std::vector<QhPolynomial> change_log;
    HamiltonianForm form = HamiltonianForm::raw;

    Coefficient a() const { return Coefficient(3) * parts.coeff({3, 0, 0}); }
    Coefficient b() const { return -parts.coeff({1, 0, 1}); }
    /// Coefficient of x^k eps^m in the potential of a mechanical Hamiltonian.
    Coefficient u(int k, int m) const { return parts.coeff({k, 0, m}); }
};

struct InterpolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// h^n = sum_{p=6}^{n+5} h_p with time-one map matching the family through orders (n+2, n+3).
FormalHamiltonian interpolate(const MapFamily& map, int n);

/// Removes y-dependence beyond y^2/2 through order n+5 by exp(L_chi_p), p = 6, 7, ...
FormalHamiltonian simplify(const FormalHamiltonian& h, int n);

/// Time-one map components (exp(L_h) x, exp(L_h) y) through orders (top, top+1).
std::pair<QhSeries, QhSeries> time_one_map(const QhSeries& h, int top);

/// Composite change X = exp(L_chi_N) ... exp(L_chi_6) x for both coordinates through order top.
std::pair<QhSeries, QhSeries> change_map(const std::vector<QhPolynomial>& log, int top);

/// Applies exp(-L_chi) in reverse order; undoes simplify on the Hamiltonian.
QhSeries undo_changes(const std::vector<QhPolynomial>& log, const QhSeries& h);

/// Polynomial in scaled (X, Y) with exact coefficients: exponent pair -> coefficient.
using ScaledPolynomial = std::map<std::pair<int, int>, Coefficient>;

/// parts[k-1] = h_{5+k}(X, Y, 1) for k = 1..n, so H^n = sum_k delta^k parts[k-1].
struct ScaledHamiltonian {
    std::vector<ScaledPolynomial> parts;
};

ScaledHamiltonian scaled_hamiltonian(const FormalHamiltonian& h, int n);

nlohmann::json to_json(const FormalHamiltonian& h);
FormalHamiltonian hamiltonian_from_json(const nlohmann::json& j);

}  // namespace separatrix
