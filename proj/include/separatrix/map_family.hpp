#pragma once

#include "separatrix/qh_series.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace separatrix {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Map x1 = x + y + f(x,y,eps), y1 = y + g(x,y,eps).
struct MapFamily {
    std::string label;
    QhSeries f;
    QhSeries g;
    /// Optional linear involution R with R F R = F^{-1}, row-major.
    std::optional<std::array<long, 4>> reversor;

    int truncation() const { return std::min(f.truncation(), g.truncation()); }
};

struct SignNormalization {
    bool flip_x = false;    // (x, y) -> (-x, -y)
    bool flip_eps = false;  // eps -> -eps
    std::vector<std::string> describe() const;
};

/// Structural checks: lowest orders, Jordan linear part, area preservation through truncation.
void validate_map(const MapFamily& map, int through_order);

/// a = 3 * [x^3]h6, b = -[eps x]h6 read off g4.
std::pair<Coefficient, Coefficient> h6_parameters(const MapFamily& map);

std::pair<MapFamily, SignNormalization> normalize_signs(const MapFamily& map);

MapFamily map_from_json(const nlohmann::json& j);
nlohmann::json map_to_json(const MapFamily& map);

std::vector<std::string> builtin_map_names();
/// Accepts "builtin:<name>", a bare built-in name, or a JSON file path.
MapFamily load_map(const std::string& source);

}  // namespace separatrix
