#pragma once

#include <string>
#include <vector>

#include "sweep.hpp"

namespace mandelq::cli {

/// Names of the built-in figure-data sweeps, fig1a ... fig5d.
const std::vector<std::string>& preset_names();

/// The named built-in sweep. Output path, format, cutoff and cross-check are
/// left at their defaults for the caller to override. Throws ValidationError
/// for unknown names.
SweepSpec preset_sweep(const std::string& name);

}  // namespace mandelq::cli
