#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "separatrix/interpolator.hpp"

#include <fstream>

using namespace separatrix;

namespace {

nlohmann::json golden(const std::string& name) {
    std::ifstream in(std::string(SEPARATRIX_GOLDEN_DIR) + "/" + name + ".json");
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

Coefficient golden_rational(const nlohmann::json& e) {
    return Coefficient(Rational(Integer(e.at("num").get<std::string>()), Integer(e.at("den").get<std::string>())));
}

QhSeries mc_poly() { return QhSeries::eps() - QhSeries::x() * QhSeries::x(); }

}  // namespace

TEST_CASE("built-in family leading interpolant") {
    MapFamily m = load_map("builtin:mcmillan");
    FormalHamiltonian h = interpolate(m, 2);
    QhSeries h6 = QhSeries::monomial({0, 2, 0}, Coefficient::fraction(1, 2)) +
                  QhSeries::monomial({3, 0, 0}, Coefficient::fraction(1, 3)) + QhSeries::monomial({1, 0, 1}, -1);
    CHECK(h.parts.part(6) == h6.part(6));
    QhSeries h7 = QhSeries::monomial({0, 1, 1}, Coefficient::fraction(1, 2)) +
                  QhSeries::monomial({2, 1, 0}, Coefficient::fraction(-1, 2));
    CHECK(h.parts.part(7) == h7.part(7));
    CHECK(h.a() == Coefficient(1));
    CHECK(h.b() == Coefficient(1));
}

TEST_CASE("interpolant matches independent oracle") {
    for (std::string name : {"mcmillan", "henon", "sheared"}) {
        nlohmann::json g = golden(name);
        int n = g.at("n_interp").get<int>();
        MapFamily m = normalize_signs(load_map(name)).first;
        FormalHamiltonian h = interpolate(m, n);
        QhSeries expect(n + 5);
        for (const auto& e : g.at("h")) expect.add_term({e.at("k"), e.at("l"), e.at("m")}, golden_rational(e));
        CHECK_MESSAGE(h.parts == expect, name);
        FormalHamiltonian s = simplify(h, n);
        QhSeries u(n + 5);
        u.add_term({0, 2, 0}, Coefficient::fraction(1, 2));
        for (const auto& e : g.at("u")) u.add_term({e.at("k"), 0, e.at("m")}, golden_rational(e));
        CHECK_MESSAGE(s.parts == u, name);
        std::map<int, QhPolynomial> chis;
        for (const auto& e : g.at("chi")) {
            int p = e.at("p");
            chis.try_emplace(p, QhPolynomial(p)).first->second.add_term({e.at("k"), e.at("l"), e.at("m")},
                                                                       golden_rational(e));
        }
        for (const auto& chi : s.change_log) {
            QhPolynomial expect_chi = chis.count(chi.order()) ? chis.at(chi.order()) : QhPolynomial(chi.order());
            CHECK_MESSAGE(chi == expect_chi, name << " chi_" << chi.order());
        }
    }
}

TEST_CASE("interpolation defect vanishes below orders (n+3, n+4)") {
    MapFamily m = load_map("builtin:mcmillan");
    for (int n = 1; n <= 6; ++n) {
        FormalHamiltonian h = interpolate(m, n);
        auto [px, py] = time_one_map(h.parts, n + 2);
        QhSeries dx = px - (QhSeries::x() + QhSeries::y() + mc_poly()).truncated(n + 2);
        QhSeries dy = py - (QhSeries::y() + mc_poly()).truncated(n + 3);
        for (int p = 0; p < n + 3; ++p) CHECK(dx.part(p).is_zero());
        for (int p = 0; p < n + 4; ++p) CHECK(dy.part(p).is_zero());
    }
}

TEST_CASE("order-6 interpolant ignores higher map orders") {
    MapFamily full = load_map("builtin:sheared");
    MapFamily low = full;
    low.f = full.f.truncated(4);
    low.g = full.g.truncated(5);
    CHECK(interpolate(low, 1).parts.part(6) == interpolate(full, 5).parts.part(6));
}

TEST_CASE("uniqueness across interpolation orders") {
    MapFamily m = load_map("builtin:sheared");
    FormalHamiltonian a = interpolate(m, 4);
    FormalHamiltonian b = interpolate(m, 5);
    CHECK(b.parts.truncated(9) == a.parts);
}

TEST_CASE("simplify") {
    MapFamily m = load_map("builtin:mcmillan");
    FormalHamiltonian raw = interpolate(m, 7);
    FormalHamiltonian mech = simplify(raw, 7);
    for (const auto& [p, poly] : mech.parts.parts())
        for (const auto& [t, c] : poly.terms())
            if (t.l > 0) CHECK((t.k == 0 && t.l == 2 && t.m == 0));
    CHECK(mech.parts.part(7).is_zero());
    // even p leaves u_{p+1} = 0: odd-order potential parts vanish
    for (int p = 7; p <= 12; p += 2) CHECK(mech.parts.part(p).is_zero());
    QhSeries back = undo_changes(mech.change_log, mech.parts);
    QhSeries diff = back - raw.parts;
    for (const auto& [p, poly] : diff.parts())
        for (const auto& [t, c] : poly.terms()) CHECK((t.k == 0 && t.l == 0));

    FormalHamiltonian already;
    already.parts = (QhSeries::monomial({0, 2, 0}, Coefficient::fraction(1, 2)) +
                     QhSeries::monomial({3, 0, 0}, Coefficient::fraction(1, 3)) +
                     QhSeries::monomial({1, 0, 1}, -1) + QhSeries::monomial({4, 0, 0}, 2))
                        .with_truncation(10);
    FormalHamiltonian same = simplify(already, 5);
    CHECK(same.parts == already.parts);
    for (const auto& chi : same.change_log) CHECK(chi.is_zero());
}

TEST_CASE("change map is canonical") {
    MapFamily m = load_map("builtin:sheared");
    FormalHamiltonian mech = simplify(interpolate(m, 7), 7);
    auto [cx, cy] = change_map(mech.change_log, 12);
    QhSeries br = poisson(cx, cy);
    CHECK(br.truncated(br.truncation()) == QhSeries::monomial({0, 0, 0}, 1).truncated(br.truncation()));
    CHECK(br.truncation() >= 7);
}

TEST_CASE("normalize_signs") {
    MapFamily m;
    m.label = "flipped";
    m.f = QhSeries::x() * QhSeries::x() - QhSeries::eps();
    m.g = m.f;
    auto [n1, s1] = normalize_signs(m);
    CHECK(s1.flip_x);
    CHECK(!s1.flip_eps);
    auto ab = h6_parameters(n1);
    CHECK(ab.first == Coefficient(1));
    CHECK(ab.second == Coefficient(1));
    auto [n2, s2] = normalize_signs(load_map("builtin:mcmillan"));
    CHECK(s2.describe().empty());
    MapFamily deg = m;
    deg.g = QhSeries::x() * QhSeries::x();
    deg.f = deg.g;
    CHECK_THROWS_AS(normalize_signs(deg), ValidationError);
    MapFamily eflip = m;
    eflip.f = QhSeries::eps() * Coefficient(-1) - QhSeries::x() * QhSeries::x();
    eflip.g = eflip.f;
    auto [n3, s3] = normalize_signs(eflip);
    CHECK(s3.flip_eps);
    CHECK(!s3.flip_x);
    CHECK(h6_parameters(n3).second == Coefficient(1));
}

TEST_CASE("henon family normalizes to a = b = 1") {
    auto [m, s] = normalize_signs(load_map("builtin:henon"));
    CHECK(s.flip_x);
    FormalHamiltonian h = interpolate(m, 1);
    CHECK(h.a() == Coefficient(1));
    CHECK(h.b() == Coefficient(1));
}

TEST_CASE("non area preserving input is rejected") {
    MapFamily m;
    m.f = QhSeries::x() * QhSeries::x();
    m.g = QhSeries::eps();
    CHECK_THROWS_AS(interpolate(m, 2), ValidationError);
}

TEST_CASE("scaled hamiltonian") {
    MapFamily m = load_map("builtin:mcmillan");
    FormalHamiltonian h = interpolate(m, 2);
    ScaledHamiltonian s = scaled_hamiltonian(h, 2);
    REQUIRE(s.parts.size() == 2);
    CHECK(s.parts[0].at({0, 2}) == Coefficient::fraction(1, 2));
    CHECK(s.parts[0].at({3, 0}) == Coefficient::fraction(1, 3));
    CHECK(s.parts[0].at({1, 0}) == Coefficient(-1));
    CHECK(s.parts[1].at({0, 1}) == Coefficient::fraction(1, 2));
    CHECK(s.parts[1].at({2, 1}) == Coefficient::fraction(-1, 2));
    CHECK(s.parts[1].size() == 2);
    CHECK_THROWS(scaled_hamiltonian(h, 3));
}
