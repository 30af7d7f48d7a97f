#include "sweep.hpp"

#include <cmath>
#include <complex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "format.hpp"
#include "version.hpp"
#include "mandelq/errors.hpp"

namespace mandelq::cli {

namespace {

struct FamilyScheme {
  std::set<std::string> params;  // accepted fixed-parameter names
  std::set<std::string> axes;    // sweepable parameter names
};

const FamilyScheme& family_scheme(const std::string& family) {
  static const std::map<std::string, FamilyScheme> schemes = {
      {"squeezed-coherent",
       {{"z1_abs", "z1_arg", "z2_abs", "z2_arg", "a", "b"}, {"a", "b"}}},
      {"squeezed-thermal", {{"beta", "a", "b"}, {"a", "b", "beta"}}},
      {"superposition", {{"u1", "u2", "v1", "v2", "r", "eta"}, {"eta", "r"}}},
  };
  const auto it = schemes.find(family);
  if (it == schemes.end()) {
    throw ValidationError("unknown sweep family '" + family +
                          "' (expected squeezed-coherent, squeezed-thermal or superposition)");
  }
  return it->second;
}

double param_or(const std::map<std::string, double>& params, const std::string& name,
                double fallback) {
  const auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

void validate_spec(const SweepSpec& spec) {
  const FamilyScheme& scheme = family_scheme(spec.family);
  for (const auto& [name, value] : spec.fixed) {
    if (!scheme.params.contains(name)) {
      throw ValidationError("parameter '" + name + "' does not apply to family '" +
                            spec.family + "'");
    }
    if (!std::isfinite(value)) {
      throw ValidationError("parameter '" + name + "' must be finite");
    }
    if (name.ends_with("_abs") && value < 0.0) {
      throw ValidationError("modulus '" + name + "' must be non-negative");
    }
  }
  if (spec.axes.empty() || spec.axes.size() > 2) {
    throw ValidationError("a sweep needs 1 or 2 axes, got " +
                          std::to_string(spec.axes.size()));
  }
  std::set<std::string> seen;
  for (const Axis& axis : spec.axes) {
    if (!scheme.axes.contains(axis.name)) {
      throw ValidationError("axis '" + axis.name + "' cannot be swept for family '" +
                            spec.family + "'");
    }
    if (!seen.insert(axis.name).second) {
      throw ValidationError("axis '" + axis.name + "' declared twice");
    }
    if (spec.fixed.contains(axis.name)) {
      throw ValidationError("axis '" + axis.name + "' collides with a fixed parameter");
    }
    if (axis.steps < 2) {
      throw ValidationError("axis '" + axis.name + "' needs at least 2 steps");
    }
    if (!std::isfinite(axis.min) || !std::isfinite(axis.max) || !(axis.min < axis.max)) {
      throw ValidationError("axis '" + axis.name + "' needs finite min < max");
    }
  }
  if (spec.n_max && *spec.n_max < 1) {
    throw ValidationError("cutoff override n_max must be at least 1");
  }
}

}  // namespace

TwoModeState assemble_state(const std::string& family,
                            const std::map<std::string, double>& params) {
  const FamilyScheme& scheme = family_scheme(family);
  for (const auto& entry : params) {
    if (!scheme.params.contains(entry.first)) {
      throw ValidationError("parameter '" + entry.first + "' does not apply to family '" +
                            family + "'");
    }
  }
  if (family == "squeezed-coherent") {
    return SqueezedCoherent{
        std::polar(param_or(params, "z1_abs", 0.0), param_or(params, "z1_arg", 0.0)),
        std::polar(param_or(params, "z2_abs", 0.0), param_or(params, "z2_arg", 0.0)),
        param_or(params, "a", 0.0), param_or(params, "b", 0.0)};
  }
  if (family == "squeezed-thermal") {
    return SqueezedThermal{param_or(params, "beta", 1.0), param_or(params, "a", 0.0),
                           param_or(params, "b", 0.0)};
  }
  return CoherentSuperposition{param_or(params, "u1", 0.0),  param_or(params, "u2", 0.0),
                               param_or(params, "v1", 0.0),  param_or(params, "v2", 0.0),
                               param_or(params, "r", 1.0),   param_or(params, "eta", 0.0)};
}

std::vector<double> axis_values(const Axis& axis) {
  std::vector<double> values(axis.steps);
  const double step = (axis.max - axis.min) / (axis.steps - 1);
  for (int k = 0; k < axis.steps; ++k) values[k] = axis.min + k * step;
  values.back() = axis.max;
  return values;
}

Axis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ParseError("axis spec '" + text + "' is not name=min:max:steps");
  }
  Axis axis;
  axis.name = text.substr(0, eq);
  const std::string rest = text.substr(eq + 1);
  const auto c1 = rest.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : rest.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos ||
      rest.find(':', c2 + 1) != std::string::npos) {
    throw ParseError("axis spec '" + text + "' is not name=min:max:steps");
  }
  axis.min = parse_real(rest.substr(0, c1));
  axis.max = parse_real(rest.substr(c1 + 1, c2 - c1 - 1));
  const double steps = parse_real(rest.substr(c2 + 1));
  if (steps != std::floor(steps) || steps < 2.0 || steps > 1e6) {
    throw ParseError("axis spec '" + text + "': steps must be an integer >= 2");
  }
  axis.steps = static_cast<int>(steps);
  return axis;
}

SweepResult run_sweep(const SweepSpec& spec) {
  validate_spec(spec);
  std::vector<std::vector<double>> grids;
  grids.reserve(spec.axes.size());
  for (const Axis& axis : spec.axes) grids.push_back(axis_values(axis));

  InvariantOptions options;
  options.cross_check_closed_form = spec.cross_check;
  if (spec.n_max) options.cutoff = Cutoff{*spec.n_max, 0};

  SweepResult result;
  std::size_t total = grids[0].size();
  if (grids.size() == 2) total *= grids[1].size();
  result.rows.reserve(total);

  std::map<std::string, double> params = spec.fixed;
  const auto evaluate = [&](const std::vector<double>& point) {
    for (std::size_t k = 0; k < point.size(); ++k) params[spec.axes[k].name] = point[k];
    SweepRow row{point, std::nullopt};
    try {
      row.result = invariant_mandel_q(assemble_state(spec.family, params), options);
    } catch (const ZeroIntensity&) {
      // degenerate input: emitted as an undefined row, sweep continues
    }
    result.rows.push_back(std::move(row));
  };

  for (const double outer : grids[0]) {
    if (grids.size() == 1) {
      evaluate({outer});
    } else {
      for (const double inner : grids[1]) evaluate({outer, inner});
    }
  }
  return result;
}

const char* method_label(MinimizeMethod method) {
  return method == MinimizeMethod::SecularExact ? "secular-exact" : "grid-refine";
}

std::string to_csv(const SweepSpec& spec, const SweepResult& result) {
  std::string out;
  for (const Axis& axis : spec.axes) {
    out += axis.name;
    out += ',';
  }
  out += "Q,q1,q2,q3,method,degenerate_flag\n";
  for (const SweepRow& row : result.rows) {
    for (const double value : row.axis_values) {
      out += format_real(value);
      out += ',';
    }
    if (row.result) {
      const QResult& r = *row.result;
      out += format_real(r.q_min);
      out += ',';
      out += format_real(r.q_bar.q(0));
      out += ',';
      out += format_real(r.q_bar.q(1));
      out += ',';
      out += format_real(r.q_bar.q(2));
      out += ',';
      out += method_label(r.method);
      out += ',';
      out += r.degenerate ? "true" : "false";
    } else {
      out += ",,,,,undefined";
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const SweepSpec& spec, const SweepResult& result) {
  using json = nlohmann::ordered_json;
  const auto fold = [](double x) { return x == 0.0 ? 0.0 : x; };

  json metadata;
  metadata["family"] = spec.family;
  json fixed = json::object();
  for (const auto& [name, value] : spec.fixed) fixed[name] = fold(value);
  metadata["fixed"] = fixed;
  json axes = json::array();
  for (const Axis& axis : spec.axes) {
    axes.push_back({{"name", axis.name},
                    {"min", fold(axis.min)},
                    {"max", fold(axis.max)},
                    {"steps", axis.steps}});
  }
  metadata["axes"] = axes;
  metadata["cutoff"] = spec.n_max ? json{{"n_max", *spec.n_max}} : json(nullptr);
  metadata["tool_version"] = k_tool_version;
  metadata["tolerances"] = {{"degeneracy", 1e-9},
                            {"refine", 1e-10},
                            {"cross_check", spec.cross_check ? json(2e-6) : json(nullptr)}};

  json columns = json::array();
  for (const Axis& axis : spec.axes) columns.push_back(axis.name);
  for (const char* name : {"Q", "q1", "q2", "q3", "method", "degenerate_flag"}) {
    columns.push_back(name);
  }

  json rows = json::array();
  for (const SweepRow& row : result.rows) {
    json record = json::array();
    for (const double value : row.axis_values) record.push_back(fold(value));
    if (row.result) {
      const QResult& r = *row.result;
      record.push_back(fold(r.q_min));
      record.push_back(fold(r.q_bar.q(0)));
      record.push_back(fold(r.q_bar.q(1)));
      record.push_back(fold(r.q_bar.q(2)));
      record.push_back(method_label(r.method));
      record.push_back(r.degenerate ? "true" : "false");
    } else {
      for (int k = 0; k < 5; ++k) record.push_back(nullptr);
      record.push_back("undefined");
    }
    rows.push_back(std::move(record));
  }

  json doc;
  doc["metadata"] = std::move(metadata);
  doc["columns"] = std::move(columns);
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string render_sweep(const SweepSpec& spec, const SweepResult& result) {
  return spec.format == SweepSpec::Format::Csv ? to_csv(spec, result)
                                               : to_json(spec, result);
}

}  // namespace mandelq::cli
