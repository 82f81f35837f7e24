#include "separatrix/map_family.hpp"

#include "builtin_maps.hpp"

#include <fstream>

namespace separatrix {

std::vector<std::string> SignNormalization::describe() const {
    std::vector<std::string> out;
    if (flip_x) out.push_back("(x,y)->(-x,-y)");
    if (flip_eps) out.push_back("eps->-eps");
    return out;
}

void validate_map(const MapFamily& map, int through_order) {
    if (map.f.truncation() < through_order || map.g.truncation() < through_order)
        throw ValidationError("map '" + map.label + "' is truncated below order " + std::to_string(through_order));
    if (map.f.lowest_order() < 4) throw ValidationError("f must start at order >= 4");
    if (map.g.lowest_order() < 4) throw ValidationError("g must start at order >= 4");
    AreaCheck chk = validate_area_preservation(map.f, map.g, through_order);
    if (!chk.ok)
        throw ValidationError("map '" + map.label + "' is not area preserving at order " +
                              std::to_string(chk.first_failing_order));
}

std::pair<Coefficient, Coefficient> h6_parameters(const MapFamily& map) {
    // -dh6/dx = g4 with h6 = y^2/2 + a x^3/3 - b eps x
    Coefficient gx2 = map.g.coeff({2, 0, 0});
    Coefficient ge = map.g.coeff({0, 0, 1});
    return {-gx2, ge};
}

namespace {

QhSeries reflect(const QhSeries& s, bool flip_x, bool flip_eps) {
    QhSeries out(s.truncation());
    for (const auto& [p, poly] : s.parts()) {
        for (const auto& [t, c] : poly.terms()) {
            int sign = 1;
            if (flip_x && (t.k + t.l) % 2 == 0) sign = -sign;  // -f(-x,-y)
            if (flip_eps && t.m % 2) sign = -sign;
            out.add_term(t, sign > 0 ? c : -c);
        }
    }
    return out;
}

}  // namespace

std::pair<MapFamily, SignNormalization> normalize_signs(const MapFamily& map) {
    auto [a, b] = h6_parameters(map);
    if (a.is_zero() || b.is_zero()) throw ValidationError("degenerate bifurcation: a*b = 0 in h6");
    SignNormalization sn;
    if (a.sign() < 0) {
        sn.flip_x = true;
        b = -b;
    }
    if (b.sign() < 0) sn.flip_eps = true;
    MapFamily out = map;
    out.f = reflect(map.f, sn.flip_x, sn.flip_eps);
    out.g = reflect(map.g, sn.flip_x, sn.flip_eps);
    return {out, sn};
}

namespace {

QhSeries terms_from_json(const nlohmann::json& arr, int trunc, long d) {
    QhSeries s(trunc);
    for (const auto& e : arr) {
        Monomial t{e.value("k", 0), e.value("l", 0), e.value("m", 0)};
        if (qh_order(t) > trunc) throw ValidationError("map term above declared truncation");
        s.add_term(t, coefficient_from_json(e, d));
    }
    return s;
}

nlohmann::json terms_to_json(const QhSeries& s) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [p, poly] : s.parts()) {
        for (const auto& [t, c] : poly.terms()) {
            nlohmann::json e = coefficient_to_json(c);
            e["k"] = t.k;
            e["l"] = t.l;
            e["m"] = t.m;
            arr.push_back(e);
        }
    }
    return arr;
}

}  // namespace

MapFamily map_from_json(const nlohmann::json& j) {
    MapFamily m;
    m.label = j.value("name", std::string("unnamed"));
    int trunc = QhSeries::kExact;
    if (j.contains("truncation") && !j.at("truncation").is_null()) trunc = j.at("truncation").get<int>();
    long d = j.value("d", 0L);
    m.f = terms_from_json(j.at("f"), trunc, d);
    m.g = terms_from_json(j.at("g"), trunc, d);
    if (j.contains("reversor")) {
        const auto& r = j.at("reversor");
        m.reversor = std::array<long, 4>{r.at(0).at(0).get<long>(), r.at(0).at(1).get<long>(),
                                        r.at(1).at(0).get<long>(), r.at(1).at(1).get<long>()};
    }
    return m;
}

nlohmann::json map_to_json(const MapFamily& map) {
    nlohmann::json j;
    j["name"] = map.label;
    int trunc = map.truncation();
    j["truncation"] = trunc >= QhSeries::kExact ? nlohmann::json(nullptr) : nlohmann::json(trunc);
    long d = std::max(map.f.radicand(), map.g.radicand());
    if (d) j["d"] = d;
    j["f"] = terms_to_json(map.f);
    j["g"] = terms_to_json(map.g);
    if (map.reversor) {
        const auto& r = *map.reversor;
        j["reversor"] = {{r[0], r[1]}, {r[2], r[3]}};
    }
    return j;
}

std::vector<std::string> builtin_map_names() {
    std::vector<std::string> out;
    for (const auto& [name, text] : builtin_map_sources()) out.push_back(name);
    return out;
}

MapFamily load_map(const std::string& source) {
    std::string name = source.rfind("builtin:", 0) == 0 ? source.substr(8) : source;
    for (const auto& [bname, text] : builtin_map_sources())
        if (bname == name) return map_from_json(nlohmann::json::parse(text));
    if (source.rfind("builtin:", 0) == 0) throw ValidationError("unknown built-in map '" + name + "'");
    std::ifstream in(source);
    if (!in) throw ValidationError("cannot open map file '" + source + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("map file '" + source + "': " + e.what());
    }
    return map_from_json(j);
}

}  // namespace separatrix
