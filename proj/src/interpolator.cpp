#include "separatrix/interpolator.hpp"

namespace separatrix {

namespace {

QhSeries part_series(const QhSeries& s, int p) {
    QhSeries out;
    out.set_part(s.part(p));
    return out;
}

// Antiderivative in y (or x) of an exact series, integration function pinned to zero.
QhSeries integrate_y(const QhSeries& s) {
    QhSeries out;
    for (const auto& [p, poly] : s.parts())
        for (const auto& [t, c] : poly.terms()) out.add_term({t.k, t.l + 1, t.m}, c / Coefficient(t.l + 1));
    return out;
}

QhSeries integrate_x(const QhSeries& s) {
    QhSeries out;
    for (const auto& [p, poly] : s.parts())
        for (const auto& [t, c] : poly.terms()) out.add_term({t.k + 1, t.l, t.m}, c / Coefficient(t.k + 1));
    return out;
}

bool depends_on_y(const QhSeries& s) {
    for (const auto& [p, poly] : s.parts())
        for (const auto& [t, c] : poly.terms())
            if (t.l > 0) return true;
    return false;
}

QhSeries drop_pure_eps(const QhSeries& s) {
    QhSeries out(s.truncation());
    for (const auto& [p, poly] : s.parts())
        for (const auto& [t, c] : poly.terms())
            if (t.k != 0 || t.l != 0) out.add_term(t, c);
    return out;
}

}  // namespace

std::pair<QhSeries, QhSeries> time_one_map(const QhSeries& h, int top) {
    QhSeries he = h.with_truncation(QhSeries::kExact);
    if (h.truncation() < top + 3)
        throw std::invalid_argument("time_one_map: Hamiltonian truncated below order " + std::to_string(top + 3));
    return {lie_exp(he, QhSeries::x(), top), lie_exp(he, QhSeries::y(), top + 1)};
}

FormalHamiltonian interpolate(const MapFamily& map, int n) {
    if (n < 1) throw std::invalid_argument("interpolate: order must be >= 1");
    validate_map(map, n + 3);
    QhSeries fx = QhSeries::x() + QhSeries::y() + map.f.truncated(n + 2);
    QhSeries fy = QhSeries::y() + map.g.truncated(n + 3);
    QhSeries h;
    for (int p = 3; p <= n + 2; ++p) {
        QhSeries xs = lie_exp(h, QhSeries::x(), p);
        QhSeries ys = lie_exp(h, QhSeries::y(), p + 1);
        QhSeries rx = part_series(fx, p) - part_series(xs, p);      // = dh/dy
        QhSeries ry = part_series(fy, p + 1) - part_series(ys, p + 1);  // = -dh/dx
        QhSeries div = rx.dx() + ry.dy();
        if (!div.is_zero())
            throw InterpolationError("interpolation not solvable at order " + std::to_string(p + 3) +
                                     ": divergence-free condition fails");
        QhSeries hy = integrate_y(rx);
        QhSeries rest = -ry - hy.dx();
        if (depends_on_y(rest)) throw InterpolationError("interpolation: inconsistent x-antiderivative");
        h += hy + integrate_x(rest);
    }
    FormalHamiltonian out;
    out.parts = h.with_truncation(n + 5);
    return out;
}

FormalHamiltonian simplify(const FormalHamiltonian& h, int n) {
    int top = n + 5;
    if (h.parts.truncation() < top) throw std::invalid_argument("simplify: Hamiltonian truncated below order n+5");
    QhSeries cur = drop_pure_eps(h.parts.truncated(top));
    const QhPolynomial& h6 = cur.part(6);
    if (h6.coeff({0, 2, 0}) != Coefficient(Rational(1, 2)) || h6.terms().size() != 3)
        throw InterpolationError("simplify: leading part is not y^2/2 + a x^3/3 - b eps x");
    QhSeries du6 = QhSeries::monomial({2, 0, 0}, Coefficient(3) * h6.coeff({3, 0, 0})) +
                   QhSeries::monomial({0, 0, 1}, h6.coeff({1, 0, 1}));
    FormalHamiltonian out;
    for (int p = 6; p < top; ++p) {
        // h_{p+1} = sum_j y^j s_j(x, eps)
        std::map<int, QhSeries> s;
        for (const auto& [t, c] : cur.part(p + 1).terms()) s[t.l].add_term({t.k, 0, t.m}, c);
        QhPolynomial chi(p);
        if (!s.empty() && s.rbegin()->first > 0) {
            // y^m: s_m + (m+1) u6' sigma_{m+1} - sigma_{m-1}' = 0
            int top_power = s.rbegin()->first;
            std::map<int, QhSeries> sigma;
            for (int m = top_power; m >= 1; --m) {
                QhSeries rhs = s[m];
                if (sigma.count(m + 1)) rhs += du6 * sigma[m + 1] * Coefficient(m + 1);
                sigma[m - 1] = integrate_x(rhs);
            }
            for (const auto& [j, sj] : sigma)
                for (const auto& [q, poly] : sj.parts())
                    for (const auto& [t, c] : poly.terms()) chi.add_term({t.k, t.l + j, t.m}, c);
            QhSeries gen;
            gen.set_part(chi);
            cur = drop_pure_eps(lie_exp(gen, cur, top));
            if (depends_on_y(part_series(cur, p + 1)))
                throw InterpolationError("simplify: homological equation left y-dependence at order " +
                                         std::to_string(p + 1));
        }
        out.change_log.push_back(chi);
    }
    out.parts = cur;
    out.form = HamiltonianForm::mechanical;
    return out;
}

std::pair<QhSeries, QhSeries> change_map(const std::vector<QhPolynomial>& log, int top) {
    QhSeries cx = QhSeries::x(), cy = QhSeries::y();
    cx = cx.truncated(top);
    cy = cy.truncated(top);
    for (const auto& chi : log) {
        if (chi.is_zero()) continue;
        QhSeries gen;
        gen.set_part(chi);
        cx = lie_exp(gen, cx, top);
        cy = lie_exp(gen, cy, top);
    }
    return {cx, cy};
}

QhSeries undo_changes(const std::vector<QhPolynomial>& log, const QhSeries& h) {
    QhSeries cur = h;
    for (auto it = log.rbegin(); it != log.rend(); ++it) {
        if (it->is_zero()) continue;
        QhSeries gen;
        gen.set_part(*it);
        cur = lie_exp(-gen, cur, cur.truncation());
    }
    return cur;
}

ScaledHamiltonian scaled_hamiltonian(const FormalHamiltonian& h, int n) {
    if (h.parts.truncation() < n + 5)
        throw std::invalid_argument("scaled_hamiltonian: Hamiltonian available only through order " +
                                    std::to_string(h.parts.truncation()));
    ScaledHamiltonian out;
    out.parts.resize(n);
    for (int k = 1; k <= n; ++k) {
        for (const auto& [t, c] : h.parts.part(5 + k).terms()) {
            auto& slot = out.parts[k - 1][{t.k, t.l}];
            slot += c;
            if (slot.is_zero()) out.parts[k - 1].erase({t.k, t.l});
        }
    }
    return out;
}

nlohmann::json to_json(const FormalHamiltonian& h) {
    nlohmann::json j;
    j["form"] = h.form == HamiltonianForm::raw ? "raw" : "mechanical";
    j["hamiltonian"] = to_json(h.parts);
    j["a"] = coefficient_to_json(h.a());
    j["b"] = coefficient_to_json(h.b());
    nlohmann::json log = nlohmann::json::array();
    for (const auto& chi : h.change_log) {
        QhSeries s;
        s.set_part(chi);
        log.push_back({{"order", chi.order()}, {"chi", to_json(s)}});
    }
    j["change_log"] = log;
    j["conventions"] = {"free additive series in eps pinned to zero",
                        "homological integration constants pinned to zero"};
    return j;
}

FormalHamiltonian hamiltonian_from_json(const nlohmann::json& j) {
    FormalHamiltonian h;
    h.form = j.at("form").get<std::string>() == "raw" ? HamiltonianForm::raw : HamiltonianForm::mechanical;
    h.parts = series_from_json(j.at("hamiltonian"));
    for (const auto& e : j.value("change_log", nlohmann::json::array())) {
        QhPolynomial chi(e.at("order").get<int>());
        for (const auto& [p, poly] : series_from_json(e.at("chi")).parts()) chi += poly;
        h.change_log.push_back(chi);
    }
    return h;
}

}  // namespace separatrix
