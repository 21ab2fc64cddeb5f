#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace fpnav::dataset {

// The 30 region types used for generated plans, sorted.
const std::array<std::string_view, 30>& region_type_catalog();

// Type of the corridor spine in generated plans.
inline constexpr std::string_view kCorridorType = "hallway";

// Curated stop-condition phrases for a goal region type; never empty.
const std::vector<std::string>& stop_phrases(std::string_view region_type);

}  // namespace fpnav::dataset
