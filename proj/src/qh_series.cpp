#include "separatrix/qh_series.hpp"

#include <algorithm>
#include <sstream>

namespace separatrix {

int qh_order(const Monomial& t) {
    if (t.k < 0 || t.l < 0 || t.m < 0) throw std::invalid_argument("negative exponent");
    return 2 * t.k + 3 * t.l + 4 * t.m;
}

Coefficient QhPolynomial::coeff(const Monomial& t) const {
    auto it = terms_.find(t);
    return it == terms_.end() ? Coefficient() : it->second;
}

void QhPolynomial::add_term(const Monomial& t, const Coefficient& c) {
    if (qh_order(t) != order_) throw std::invalid_argument("term order does not match polynomial order");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(t, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

QhPolynomial& QhPolynomial::operator+=(const QhPolynomial& o) {
    if (o.order_ != order_ && !o.is_zero()) throw std::invalid_argument("adding polynomials of different order");
    for (const auto& [t, c] : o.terms_) add_term(t, c);
    return *this;
}

QhPolynomial& QhPolynomial::operator-=(const QhPolynomial& o) {
    if (o.order_ != order_ && !o.is_zero()) throw std::invalid_argument("subtracting polynomials of different order");
    for (const auto& [t, c] : o.terms_) add_term(t, -c);
    return *this;
}

QhPolynomial& QhPolynomial::operator*=(const Coefficient& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [t, v] : terms_) v *= c;
    return *this;
}

QhPolynomial operator*(const QhPolynomial& a, const QhPolynomial& b) {
    QhPolynomial out(a.order() + b.order());
    for (const auto& [ta, ca] : a.terms())
        for (const auto& [tb, cb] : b.terms()) out.add_term({ta.k + tb.k, ta.l + tb.l, ta.m + tb.m}, ca * cb);
    return out;
}

QhPolynomial poisson(const QhPolynomial& f, const QhPolynomial& g) {
    QhPolynomial out(f.order() + g.order() - 5);
    for (const auto& [ta, ca] : f.terms()) {
        for (const auto& [tb, cb] : g.terms()) {
            long w = static_cast<long>(ta.k) * tb.l - static_cast<long>(ta.l) * tb.k;
            if (w == 0) continue;
            out.add_term({ta.k + tb.k - 1, ta.l + tb.l - 1, ta.m + tb.m}, ca * cb * Coefficient(w));
        }
    }
    return out;
}

QhSeries QhSeries::monomial(const Monomial& t, const Coefficient& c, int truncation) {
    QhSeries s(truncation);
    s.add_term(t, c);
    return s;
}

const QhPolynomial& QhSeries::part(int p) const {
    static const QhPolynomial empty;
    auto it = parts_.find(p);
    return it == parts_.end() ? empty : it->second;
}

Coefficient QhSeries::coeff(const Monomial& t) const { return part(qh_order(t)).coeff(t); }

int QhSeries::lowest_order() const { return parts_.empty() ? kExact : parts_.begin()->first; }

int QhSeries::highest_order() const { return parts_.empty() ? -1 : parts_.rbegin()->first; }

void QhSeries::add_term(const Monomial& t, const Coefficient& c) {
    int p = qh_order(t);
    if (p > truncation_ || c.is_zero()) return;
    auto it = parts_.try_emplace(p, QhPolynomial(p)).first;
    it->second.add_term(t, c);
    if (it->second.is_zero()) parts_.erase(it);
}

void QhSeries::set_part(const QhPolynomial& p) {
    if (p.order() > truncation_) throw std::invalid_argument("set_part above truncation");
    if (p.is_zero())
        parts_.erase(p.order());
    else
        parts_.insert_or_assign(p.order(), p);
}

QhSeries QhSeries::truncated(int n) const {
    QhSeries out(std::min(n, truncation_));
    for (const auto& [p, poly] : parts_)
        if (p <= out.truncation_) out.parts_.emplace(p, poly);
    return out;
}

QhSeries QhSeries::with_truncation(int n) const {
    QhSeries out = truncated(n);
    out.truncation_ = n;
    return out;
}

QhSeries& QhSeries::operator+=(const QhSeries& o) {
    truncation_ = std::min(truncation_, o.truncation_);
    for (auto it = parts_.begin(); it != parts_.end();)
        it = it->first > truncation_ ? parts_.erase(it) : std::next(it);
    for (const auto& [p, poly] : o.parts_) {
        if (p > truncation_) break;
        auto it = parts_.try_emplace(p, QhPolynomial(p)).first;
        it->second += poly;
        if (it->second.is_zero()) parts_.erase(it);
    }
    return *this;
}

QhSeries& QhSeries::operator-=(const QhSeries& o) { return *this += -o; }

QhSeries& QhSeries::operator*=(const Coefficient& c) {
    if (c.is_zero()) parts_.clear();
    for (auto& [p, poly] : parts_) poly *= c;
    return *this;
}

QhSeries QhSeries::operator-() const {
    QhSeries out = *this;
    out *= Coefficient(-1);
    return out;
}

QhSeries QhSeries::dx() const {
    QhSeries out(is_exact() ? kExact : truncation_ - 2);
    for (const auto& [p, poly] : parts_)
        for (const auto& [t, c] : poly.terms())
            if (t.k > 0) out.add_term({t.k - 1, t.l, t.m}, c * Coefficient(t.k));
    return out;
}

QhSeries QhSeries::dy() const {
    QhSeries out(is_exact() ? kExact : truncation_ - 3);
    for (const auto& [p, poly] : parts_)
        for (const auto& [t, c] : poly.terms())
            if (t.l > 0) out.add_term({t.k, t.l - 1, t.m}, c * Coefficient(t.l));
    return out;
}

long QhSeries::radicand() const {
    for (const auto& [p, poly] : parts_)
        for (const auto& [t, c] : poly.terms())
            if (!c.is_rational()) return c.radicand();
    return 0;
}

std::string QhSeries::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [p, poly] : parts_) {
        for (const auto& [t, c] : poly.terms()) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.to_string() << ")";
            if (t.k) os << "*x^" << t.k;
            if (t.l) os << "*y^" << t.l;
            if (t.m) os << "*e^" << t.m;
        }
    }
    if (first) os << "0";
    if (!is_exact()) os << " + O(" << truncation_ + 1 << ")";
    return os.str();
}

namespace {

// Valid order of a product-like combination whose result order is p + q + shift.
int combined_truncation(const QhSeries& a, const QhSeries& b, int shift) {
    if (a.is_exact() && b.is_exact()) return QhSeries::kExact;
    long na = a.truncation(), nb = b.truncation();
    long pa = a.lowest_order(), pb = b.lowest_order();
    long t = std::min(na + pb, nb + pa) + shift;
    return static_cast<int>(std::min<long>(t, QhSeries::kExact));
}

}  // namespace

QhSeries operator*(const QhSeries& a, const QhSeries& b) {
    QhSeries out(combined_truncation(a, b, 0));
    for (const auto& [p, pa] : a.parts()) {
        for (const auto& [q, qb] : b.parts()) {
            if (p + q > out.truncation()) break;
            QhPolynomial prod = pa * qb;
            for (const auto& [t, c] : prod.terms()) out.add_term(t, c);
        }
    }
    return out;
}

QhSeries poisson(const QhSeries& f, const QhSeries& g) {
    QhSeries out(combined_truncation(f, g, -5));
    for (const auto& [p, pf] : f.parts()) {
        for (const auto& [q, qg] : g.parts()) {
            if (p + q - 5 > out.truncation()) break;
            QhPolynomial br = poisson(pf, qg);
            for (const auto& [t, c] : br.terms()) out.add_term(t, c);
        }
    }
    return out;
}

QhSeries lie_exp(const QhSeries& chi, const QhSeries& g, int target_order) {
    if (!chi.is_zero() && chi.lowest_order() < 6)
        throw std::invalid_argument("lie_exp: generator must start at order >= 6");
    if (g.truncation() < target_order)
        throw std::invalid_argument("lie_exp: argument truncated below target order");
    QhSeries term = g.truncated(target_order);
    QhSeries out = term;
    for (int k = 1; !term.is_zero() && term.lowest_order() <= target_order; ++k) {
        QhSeries next = poisson(term, chi);
        if (!next.is_zero() && next.truncation() < target_order)
            throw std::invalid_argument("lie_exp: generator truncated below target order");
        term = next.truncated(target_order) * Coefficient(Rational(1, k));
        out += term.with_truncation(target_order);
    }
    return out.with_truncation(target_order);
}

AreaCheck validate_area_preservation(const QhSeries& f, const QhSeries& g, int up_to) {
    if (f.truncation() < up_to || g.truncation() < up_to)
        throw std::invalid_argument("validate_area_preservation: map truncated below requested order");
    QhSeries ft = f.truncated(up_to).with_truncation(QhSeries::kExact);
    QhSeries gt = g.truncated(up_to).with_truncation(QhSeries::kExact);
    QhSeries e = ft.dx() + gt.dy() + poisson(ft, gt) - gt.dx();
    for (const auto& [p, poly] : e.parts()) {
        if (p > up_to - 2) break;
        return {false, p};
    }
    return {};
}

nlohmann::json coefficient_to_json(const Coefficient& c) {
    nlohmann::json j;
    j["num"] = numerator(c.rational_part()).str();
    j["den"] = denominator(c.rational_part()).str();
    if (!c.is_rational()) {
        j["q_num"] = numerator(c.root_part()).str();
        j["q_den"] = denominator(c.root_part()).str();
    }
    return j;
}

namespace {

Rational rational_field(const nlohmann::json& j, const char* num, const char* den) {
    auto as_int = [](const nlohmann::json& v) {
        return v.is_string() ? Integer(v.get<std::string>()) : Integer(v.get<long long>());
    };
    Integer n = as_int(j.at(num));
    Integer d = j.contains(den) ? as_int(j.at(den)) : Integer(1);
    if (d == 0) throw std::invalid_argument("zero denominator in series JSON");
    return Rational(n, d);
}

}  // namespace

Coefficient coefficient_from_json(const nlohmann::json& j, long d) {
    Rational p = rational_field(j, "num", "den");
    if (!j.contains("q_num")) return Coefficient(p);
    Rational q = rational_field(j, "q_num", "q_den");
    if (q != 0 && d == 0) throw ContextError("quadratic coefficient without context radicand");
    return Coefficient(p, q, q == 0 ? 0 : d);
}

nlohmann::json to_json(const QhSeries& s) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [p, poly] : s.parts()) {
        for (const auto& [t, c] : poly.terms()) {
            nlohmann::json e = coefficient_to_json(c);
            e["k"] = t.k;
            e["l"] = t.l;
            e["m"] = t.m;
            terms.push_back(e);
        }
    }
    nlohmann::json ctx;
    ctx["d_num"] = std::to_string(s.radicand());
    ctx["d_den"] = "1";
    ctx["truncation_order"] = s.is_exact() ? nlohmann::json(nullptr) : nlohmann::json(s.truncation());
    return {{"context", ctx}, {"terms", terms}};
}

QhSeries series_from_json(const nlohmann::json& j) {
    const auto& ctx = j.at("context");
    long d = 0;
    if (ctx.contains("d_num")) {
        Rational dr = rational_field(ctx, "d_num", "d_den");
        if (dr != 0) {
            auto [sq, w] = squarefree_split(dr);
            if (w != 1 && sq != 1) throw ContextError("series JSON radicand must be squarefree");
            d = sq == 1 ? 0 : sq.convert_to<long>();
        }
    }
    int trunc = QhSeries::kExact;
    if (ctx.contains("truncation_order") && !ctx.at("truncation_order").is_null())
        trunc = ctx.at("truncation_order").get<int>();
    QhSeries s(trunc);
    for (const auto& e : j.at("terms")) {
        Monomial t{e.at("k").get<int>(), e.at("l").get<int>(), e.at("m").get<int>()};
        if (qh_order(t) > trunc) throw std::invalid_argument("series JSON term above truncation order");
        s.add_term(t, coefficient_from_json(e, d));
    }
    return s;
}

}  // namespace separatrix
