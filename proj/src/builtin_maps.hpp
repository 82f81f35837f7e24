#pragma once

#include <string>
#include <utility>
#include <vector>

namespace separatrix {

/// (name, JSON text) of the map descriptors under data/maps, embedded at build time.
const std::vector<std::pair<std::string, std::string>>& builtin_map_sources();

}  // namespace separatrix
