#pragma once

#include <string>

#include "chsh/density.hpp"

namespace chsh {

// Density spec JSON:
//   {"kind":"builtin","name":"uniform"|"quantum"}
//   {"kind":"table","delta":[...],"rho":[...]}
// Structural problems (bad JSON, bad grid) throw std::invalid_argument.
DensityModel density_from_json_text(const std::string& text);
DensityModel density_from_json_file(const std::string& path);
std::string density_to_json_text(const DensityModel& model);

// CLI convenience: "uniform" and "quantum" resolve to builtins, anything else
// is read as a path to a density spec JSON file.
DensityModel density_from_spec(const std::string& spec);

}  // namespace chsh
