#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sgf/io.hpp"

namespace sgf {

// Rates producing diminishing returns or superlinear speedup depending on the
// contribution coefficients. Contribution defaults to c_s = 1, c_g = 0.
ParamsDocument preset_table1();

// Published fits for six systems; c_g = 0 throughout.
// Names: sql, wireless, particles, swarm, nas-bt, nas-sp.
ParamsDocument preset_table2(std::string_view system);
std::vector<std::string> table2_systems();

// "table1" or "table2:<system>"
ParamsDocument load_preset(std::string_view name);

}  // namespace sgf
