#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "separatrix/qh_series.hpp"

using namespace separatrix;

namespace {

QhSeries h6(long a, long b) {
    QhSeries h = QhSeries::monomial({0, 2, 0}, Coefficient::fraction(1, 2));
    h.add_term({3, 0, 0}, Coefficient::fraction(a, 3));
    h.add_term({1, 0, 1}, Coefficient(-b));
    return h;
}

}  // namespace

TEST_CASE("coefficient field arithmetic") {
    Coefficient r2 = Coefficient::sqrt_of(Rational(2));
    CHECK(r2.radicand() == 2);
    CHECK(r2 * r2 == Coefficient(2));
    CHECK(Coefficient::sqrt_of(Rational(9, 4)) == Coefficient(Rational(3, 2)));
    CHECK(Coefficient::sqrt_of(Rational(8, 9)).root_part() == Rational(2, 3));
    Coefficient z = Coefficient(1) + r2;
    CHECK((Coefficient(1) / z) * z == Coefficient(1));
    CHECK((Coefficient(1) - r2).sign() == -1);
    CHECK((Coefficient(3) - r2 * Coefficient(2)).sign() == 1);
    CHECK_THROWS_AS(r2 + Coefficient::sqrt_of(Rational(3)), ContextError);
}

TEST_CASE("qh_order") {
    CHECK(qh_order({2, 1, 1}) == 11);
    CHECK(qh_order({0, 0, 0}) == 0);
    CHECK(qh_order({3, 0, 0}) == 6);
}

TEST_CASE("add and mul") {
    QhSeries xy = QhSeries::x() * QhSeries::y();
    CHECK(xy.coeff({1, 1, 0}) == Coefficient(1));
    CHECK(xy.parts().begin()->first == 5);
    QhSeries p = (QhSeries::x() + QhSeries::eps()) * (QhSeries::x() - QhSeries::eps());
    QhSeries expect = QhSeries::monomial({2, 0, 0}, 1) + QhSeries::monomial({0, 0, 2}, -1);
    CHECK(p == expect);
    QhSeries one = QhSeries::monomial({0, 0, 0}, 1);
    CHECK(h6(1, 1) * one == h6(1, 1));
    QhSeries t = QhSeries::x().truncated(10) * QhSeries::y().truncated(7);
    CHECK(t.truncation() == 9);
}

TEST_CASE("poisson examples") {
    CHECK(poisson(QhSeries::x(), QhSeries::y()) == QhSeries::monomial({0, 0, 0}, 1));
    for (long a : {1, 2}) {
        for (long b : {1, 3}) {
            CHECK(poisson(QhSeries::x(), h6(a, b)) == QhSeries::y());
            QhSeries expect = QhSeries::monomial({2, 0, 0}, -a) + QhSeries::monomial({0, 0, 1}, b);
            CHECK(poisson(QhSeries::y(), h6(a, b)) == expect);
        }
    }
}

TEST_CASE("lie_exp") {
    QhSeries g = QhSeries::x() + QhSeries::y() * QhSeries::eps();
    CHECK(lie_exp(QhSeries(), g, 12) == g.truncated(12));
    // exp(L_h6) x through order 4: x + y + (eps - x^2)/2 for a = b = 1
    QhSeries e = lie_exp(h6(1, 1), QhSeries::x(), 4);
    QhSeries expect = QhSeries::x() + QhSeries::y() + QhSeries::monomial({2, 0, 0}, Coefficient::fraction(-1, 2)) +
                      QhSeries::monomial({0, 0, 1}, Coefficient::fraction(1, 2));
    CHECK(e == expect.truncated(4));
    QhSeries chi = h6(1, 1) + QhSeries::monomial({2, 1, 0}, Coefficient::fraction(1, 7));
    QhSeries back = lie_exp(-chi, lie_exp(chi, QhSeries::x(), 20), 20);
    CHECK(back == QhSeries::x().truncated(20));
    CHECK_THROWS(lie_exp(QhSeries::x() * QhSeries::y(), QhSeries::x(), 6));
}

TEST_CASE("truncation fails loudly") {
    QhSeries chi = h6(1, 1).truncated(7);
    CHECK_THROWS(lie_exp(chi, QhSeries::x(), 8));
    CHECK_NOTHROW(lie_exp(chi, QhSeries::x(), 4));
}

TEST_CASE("area preservation identity") {
    QhSeries f = QhSeries::eps() - QhSeries::x() * QhSeries::x();
    CHECK(validate_area_preservation(f, f, 12).ok);
    AreaCheck bad = validate_area_preservation(QhSeries::x() * QhSeries::x(), QhSeries(), 8);
    CHECK(!bad.ok);
    CHECK(bad.first_failing_order == 2);
    CHECK(validate_area_preservation(QhSeries(), QhSeries(), 8).ok);
}

TEST_CASE("json round trip is exact") {
    Coefficient r2 = Coefficient::sqrt_of(Rational(2));
    QhSeries s(17);
    s.add_term({3, 1, 0}, Coefficient(Rational(Integer("123456789012345678901234567890"), Integer(7))));
    s.add_term({1, 0, 2}, Coefficient(Rational(1, 3)) + r2 * Coefficient(Rational(-5, 11)));
    QhSeries back = series_from_json(nlohmann::json::parse(to_json(s).dump()));
    CHECK(back == s);
    CHECK(back.truncation() == 17);
    QhSeries exact = QhSeries::x();
    CHECK(series_from_json(to_json(exact)).is_exact());
}
