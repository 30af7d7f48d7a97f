#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mandelq/minimizer.hpp"
#include "mandelq/types.hpp"

namespace mandelq::cli {

/// One swept parameter: `steps` evenly spaced values including both ends.
struct Axis {
  std::string name;  ///< a, b, beta, eta or r (family-dependent)
  double min = 0.0;
  double max = 1.0;
  int steps = 2;
};

/// Declarative description of a parameter sweep over one state family.
struct SweepSpec {
  std::string family;  ///< squeezed-coherent, squeezed-thermal or superposition
  std::map<std::string, double> fixed;  ///< parameter name -> held value
  std::vector<Axis> axes;               ///< 1 or 2, row-major in declaration order
  std::string output;                   ///< output path; empty writes to stdout
  enum class Format { Csv, Json } format = Format::Csv;
  std::optional<int> n_max;  ///< force the truncated-operator path at this cutoff
  bool cross_check = false;  ///< verify each point against the family closed form
};

/// One evaluated grid point. `result` is empty for degenerate (zero-intensity)
/// inputs, which are reported in place without aborting the sweep.
struct SweepRow {
  std::vector<double> axis_values;
  std::optional<QResult> result;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// Fixed-parameter names accepted by a family (also the assembly defaults):
///   squeezed-coherent: z1_abs, z1_arg, z2_abs, z2_arg, a, b   (moduli >= 0)
///   squeezed-thermal:  beta, a, b
///   superposition:     u1, u2, v1, v2, r, eta
/// Throws ValidationError for unknown families or parameters.
TwoModeState assemble_state(const std::string& family,
                            const std::map<std::string, double>& params);

/// min + k (max-min)/(steps-1), endpoints exact.
std::vector<double> axis_values(const Axis& axis);

/// Parses "name=min:max:steps".
Axis parse_axis(const std::string& text);

/// Validates the spec (family, axis names and bounds, parameter names) and
/// evaluates the grid serially, row-major in axis declaration order.
SweepResult run_sweep(const SweepSpec& spec);

/// "secular-exact" or "grid-refine".
const char* method_label(MinimizeMethod method);

/// CSV columns: axis names, Q, q1, q2, q3, method, degenerate_flag; degenerate
/// rows leave Q through method empty and flag `undefined`.
std::string to_csv(const SweepSpec& spec, const SweepResult& result);

/// The same rows wrapped with a metadata header {family, fixed, axes, cutoff,
/// tool_version, tolerances}; no timestamps, so reruns are byte-identical.
std::string to_json(const SweepSpec& spec, const SweepResult& result);

/// Dispatches on spec.format.
std::string render_sweep(const SweepSpec& spec, const SweepResult& result);

}  // namespace mandelq::cli
