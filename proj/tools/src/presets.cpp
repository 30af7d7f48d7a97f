#include "presets.hpp"

#include <map>
#include <numbers>

#include "mandelq/errors.hpp"

namespace mandelq::cli {

namespace {

constexpr double k_pi = std::numbers::pi;

// Squeeze-plane window shared by the squeezed families. The interesting
// structure (sign changes, the a = b valley) lives well inside it.
const std::vector<Axis> k_squeeze_axes = {{"a", 0.0, 1.5, 31}, {"b", 0.0, 1.5, 31}};

// Superposition window: one full period of the relative phase for a weak and
// an equal-weight branch.
const std::vector<Axis> k_phase_axes = {{"r", 0.5, 1.0, 2}, {"eta", 0.0, 2.0 * k_pi, 181}};

SweepSpec squeezed_coherent_preset(double z1_abs, double z1_arg, double z2_abs,
                                   double z2_arg) {
  SweepSpec spec;
  spec.family = "squeezed-coherent";
  spec.fixed = {{"z1_abs", z1_abs}, {"z1_arg", z1_arg}, {"z2_abs", z2_abs}, {"z2_arg", z2_arg}};
  spec.axes = k_squeeze_axes;
  return spec;
}

SweepSpec squeezed_thermal_preset(double beta) {
  SweepSpec spec;
  spec.family = "squeezed-thermal";
  spec.fixed = {{"beta", beta}};
  spec.axes = k_squeeze_axes;
  return spec;
}

SweepSpec superposition_preset(double u1, double u2, double v1) {
  SweepSpec spec;
  spec.family = "superposition";
  spec.fixed = {{"u1", u1}, {"u2", u2}, {"v1", v1}, {"v2", 0.0}};
  spec.axes = k_phase_axes;
  return spec;
}

const std::map<std::string, SweepSpec>& preset_table() {
  static const std::map<std::string, SweepSpec> table = {
      {"fig1a", squeezed_coherent_preset(0.0, 0.0, 0.0, 0.0)},
      {"fig1b", squeezed_coherent_preset(0.0, 0.0, 3.0, 0.0)},
      {"fig1c", squeezed_coherent_preset(0.0, 0.0, 3.0, k_pi / 4.0)},
      {"fig1d", squeezed_coherent_preset(0.0, 0.0, 3.0, k_pi / 2.0)},
      {"fig2a", squeezed_coherent_preset(2.0, 0.0, 2.0, 0.0)},
      {"fig2b", squeezed_coherent_preset(2.0, 0.0, 2.0, k_pi / 4.0)},
      {"fig2c", squeezed_coherent_preset(2.0, 0.0, 2.0, k_pi / 2.0)},
      {"fig2d", squeezed_coherent_preset(2.0, k_pi / 2.0, 2.0, k_pi / 2.0)},
      {"fig3a", squeezed_coherent_preset(2.0, 0.0, 4.0, 0.0)},
      {"fig3b", squeezed_coherent_preset(2.0, 0.0, 4.0, k_pi / 4.0)},
      {"fig3c", squeezed_coherent_preset(2.0, 0.0, 4.0, k_pi / 2.0)},
      {"fig3d", squeezed_coherent_preset(2.0, k_pi / 2.0, 4.0, k_pi / 2.0)},
      {"fig4a", squeezed_thermal_preset(0.5)},
      {"fig4b", squeezed_thermal_preset(1.0)},
      {"fig4c", squeezed_thermal_preset(2.0)},
      {"fig4d", squeezed_thermal_preset(4.0)},
      {"fig5a", superposition_preset(0.5, 0.5, 1.0)},
      {"fig5b", superposition_preset(0.5, 1.0, 1.0)},
      {"fig5c", superposition_preset(1.5, 1.0, 1.0)},
      {"fig5d", superposition_preset(1.5, 1.0, 0.5)},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, spec] : preset_table()) out.push_back(name);
    return out;
  }();
  return names;
}

SweepSpec preset_sweep(const std::string& name) {
  const auto it = preset_table().find(name);
  if (it == preset_table().end()) {
    std::string known;
    for (const std::string& preset : preset_names()) {
      if (!known.empty()) known += ", ";
      known += preset;
    }
    throw ValidationError("unknown preset '" + name + "' (available: " + known + ")");
  }
  return it->second;
}

}  // namespace mandelq::cli
