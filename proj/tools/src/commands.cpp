#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <variant>
#include <vector>

#include "format.hpp"
#include "mandelq/closed_forms.hpp"
#include "mandelq/density_io.hpp"
#include "mandelq/errors.hpp"
#include "mandelq/minimizer.hpp"

namespace mandelq::cli {

namespace {

const char* bool_label(bool value) { return value ? "true" : "false"; }

void print_result(const TwoModeState& state, const QResult& result, std::ostream& out) {
  out << "family: " << family_name(state) << '\n'
      << "Q_min: " << format_real(result.q_min) << '\n'
      << "theta_bar: " << format_real(result.q_bar.theta) << '\n'
      << "phi_bar: " << format_real(result.q_bar.phi) << '\n'
      << "q_bar: (" << format_real(result.q_bar.q(0)) << ", "
      << format_real(result.q_bar.q(1)) << ", " << format_real(result.q_bar.q(2)) << ")\n"
      << "alpha_bar: (" << format_complex(result.alpha_bar.alpha1) << ", "
      << format_complex(result.alpha_bar.alpha2) << ")\n"
      << "method: " << method_label(result.method) << '\n';
  if (result.method == MinimizeMethod::SecularExact) {
    out << "multiplier: " << format_real(result.multiplier) << '\n'
        << "stationarity: " << format_real(result.stationarity) << '\n'
        << "hard_case: " << bool_label(result.hard_case) << '\n';
  } else {
    out << "grid: " << result.grid_theta << "x" << result.grid_phi << '\n'
        << "refine_iterations: " << result.refine_iterations << '\n';
  }
  out << "degenerate: " << bool_label(result.degenerate) << '\n';
}

// Uniform double in [lo, hi) from the top 53 bits; identical sequences on
// every platform, unlike std::uniform_real_distribution.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

// Golden-angle spiral: deterministic, evenly spread sphere directions.
std::vector<SphereDirection> spread_directions(int count) {
  std::vector<SphereDirection> directions;
  directions.reserve(count);
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) {
    const double cos_theta = 1.0 - 2.0 * (k + 0.5) / count;
    const double theta = std::acos(std::clamp(cos_theta, -1.0, 1.0));
    const double phi = std::fmod(k * golden_angle, 2.0 * std::numbers::pi);
    directions.push_back(sphere_direction(theta, phi));
  }
  return directions;
}

struct LabeledState {
  TwoModeState state;
  std::vector<std::pair<std::string, double>> params;
};

std::vector<LabeledState> validation_states(const ValidateRequest& request) {
  std::vector<LabeledState> states;
  std::mt19937_64 rng(request.seed);
  if (request.family == "fock") {
    for (int n1 = 0; n1 <= request.max_n; ++n1) {
      for (int n2 = 0; n2 <= request.max_n; ++n2) {
        if (n1 + n2 == 0) continue;  // vacuum: Q undefined
        states.push_back({Fock{n1, n2},
                          {{"n1", static_cast<double>(n1)}, {"n2", static_cast<double>(n2)}}});
      }
    }
    return states;
  }
  states.reserve(request.points);
  for (int k = 0; k < request.points; ++k) {
    if (request.family == "squeezed-coherent") {
      const double z1_abs = uniform(rng, 0.0, 2.0);
      const double z1_arg = uniform(rng, 0.0, 2.0 * std::numbers::pi);
      const double z2_abs = uniform(rng, 0.0, 2.0);
      const double z2_arg = uniform(rng, 0.0, 2.0 * std::numbers::pi);
      const double a = uniform(rng, 0.0, 1.0);
      const double b = uniform(rng, 0.0, 1.0);
      states.push_back({SqueezedCoherent{std::polar(z1_abs, z1_arg),
                                         std::polar(z2_abs, z2_arg), a, b},
                        {{"z1_abs", z1_abs},
                         {"z1_arg", z1_arg},
                         {"z2_abs", z2_abs},
                         {"z2_arg", z2_arg},
                         {"a", a},
                         {"b", b}}});
    } else if (request.family == "squeezed-thermal") {
      const double beta = uniform(rng, 0.8, 3.0);
      const double a = uniform(rng, 0.0, 0.8);
      const double b = uniform(rng, 0.0, 0.8);
      states.push_back({SqueezedThermal{beta, a, b}, {{"beta", beta}, {"a", a}, {"b", b}}});
    } else if (request.family == "superposition") {
      const double u1 = uniform(rng, -1.5, 1.5);
      const double u2 = uniform(rng, -1.5, 1.5);
      const double v1 = uniform(rng, -1.5, 1.5);
      const double r = uniform(rng, 0.2, 2.0);
      const double eta = uniform(rng, 0.0, 2.0 * std::numbers::pi);
      states.push_back({CoherentSuperposition{u1, u2, v1, 0.0, r, eta},
                        {{"u1", u1}, {"u2", u2}, {"v1", v1}, {"r", r}, {"eta", eta}}});
    } else {
      throw ValidationError("unknown validate family '" + request.family +
                            "' (expected fock, squeezed-coherent, squeezed-thermal or "
                            "superposition)");
    }
  }
  return states;
}

}  // namespace

std::optional<int> resolve_n_max(const std::optional<int>& flag) {
  if (flag) {
    if (*flag < 1) throw ValidationError("n_max must be at least 1");
    return flag;
  }
  const char* env = std::getenv("MANDELQ_NMAX");
  if (env == nullptr || *env == '\0') return std::nullopt;
  int value = 0;
  const char* end = env + std::string_view(env).size();
  const auto result = std::from_chars(env, end, value);
  if (result.ec != std::errc{} || result.ptr != end || value < 1) {
    throw ParseError(std::string("MANDELQ_NMAX must be a positive integer, got '") + env +
                     "'");
  }
  return value;
}

int run_point(const TwoModeState& state, const std::optional<int>& n_max,
              bool cross_check, std::ostream& out) {
  InvariantOptions options;
  options.cross_check_closed_form = cross_check && has_closed_form(state);
  if (n_max) options.cutoff = Cutoff{*n_max, 0};
  const QResult result = invariant_mandel_q(state, options);
  print_result(state, result, out);
  return 0;
}

int run_custom(const std::string& path, std::ostream& out) {
  const ExplicitDensityMatrix density = read_density_file(path);
  const TwoModeState state{density};
  const QResult result = invariant_mandel_q(state);
  print_result(state, result, out);
  return 0;
}

int run_sweep_command(const SweepSpec& spec, std::ostream& out) {
  const SweepResult result = run_sweep(spec);
  const std::string text = render_sweep(spec, result);
  if (spec.output.empty()) {
    out << text;
  } else {
    std::ofstream file(spec.output, std::ios::binary);
    if (!file) throw ParseError("cannot open output file '" + spec.output + "'");
    file << text;
    if (!file.good()) throw ParseError("failed writing output file '" + spec.output + "'");
  }
  return 0;
}

int run_validate(const ValidateRequest& request, std::ostream& out) {
  if (request.points < 1) throw ValidationError("validate needs at least 1 point");
  if (request.directions < 1) throw ValidationError("validate needs at least 1 direction");
  if (request.max_n < 0) throw ValidationError("max_n must be non-negative");

  const std::vector<LabeledState> states = validation_states(request);
  const std::vector<SphereDirection> directions = spread_directions(request.directions);

  ValidateOptions options;
  options.tolerance = request.tolerance;
  if (request.n_max) options.cutoff = Cutoff{*request.n_max, 0};

  std::string ledger;
  if (!states.empty()) {
    for (const auto& [name, value] : states.front().params) {
      ledger += name;
      ledger += ',';
    }
    ledger += "theta,phi,closed_form,oracle,abs_diff,verdict\n";
  }

  int matches = 0;
  int mismatches = 0;
  double worst_diff = 0.0;
  for (const LabeledState& labeled : states) {
    for (const SphereDirection& direction : directions) {
      const ClosedFormReport report = validate_closed_form(labeled.state, direction, options);
      const bool match = report.verdict == Verdict::Match;
      (match ? matches : mismatches) += 1;
      if (report.abs_diff) worst_diff = std::max(worst_diff, *report.abs_diff);

      std::string line;
      for (const auto& [name, value] : labeled.params) {
        line += format_real(value);
        line += ',';
      }
      line += format_real(direction.theta);
      line += ',';
      line += format_real(direction.phi);
      line += ',';
      line += format_real(report.value);
      line += ',';
      line += report.oracle_value ? format_real(*report.oracle_value) : "";
      line += ',';
      line += report.abs_diff ? format_real(*report.abs_diff) : "";
      line += ',';
      line += match ? "match" : "mismatch";
      ledger += line;
      ledger += '\n';
      if (!match) out << "mismatch: " << line << '\n';
    }
  }

  if (!request.ledger_path.empty()) {
    std::ofstream file(request.ledger_path, std::ios::binary);
    if (!file) {
      throw ParseError("cannot open ledger file '" + request.ledger_path + "'");
    }
    file << ledger;
  }

  out << request.family << " closed form vs oracle: " << (matches + mismatches)
      << " evaluations, " << matches << " match, " << mismatches
      << " mismatch (tolerance " << format_real(request.tolerance) << ", worst |diff| "
      << format_real(worst_diff) << ")\n";
  return mismatches == 0 ? 0 : 4;
}

int run_guarded(const std::function<int()>& body) {
  const auto fail = [](int code, const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return code;
  };
  try {
    return body();
  } catch (const ZeroIntensity& e) {
    return fail(2, e);
  } catch (const ZeroModeIntensity& e) {
    return fail(2, e);
  } catch (const ParseError& e) {
    return fail(3, e);
  } catch (const ValidationError& e) {
    return fail(3, e);
  } catch (const InvalidTemperature& e) {
    return fail(3, e);
  } catch (const InvalidWeight& e) {
    return fail(3, e);
  } catch (const DimensionMismatch& e) {
    return fail(3, e);
  } catch (const Error& e) {
    // CutoffTooSmall, ConvergenceFailure, NumericalFailure, ClosedFormMismatch
    return fail(4, e);
  } catch (const std::exception& e) {
    return fail(4, e);
  }
}

}  // namespace mandelq::cli
