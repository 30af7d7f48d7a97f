#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "mandelq/types.hpp"
#include "sweep.hpp"

namespace mandelq::cli {

/// Flag wins over the MANDELQ_NMAX environment variable; neither leaves the
/// library defaults in force. Throws ParseError on a malformed env value.
std::optional<int> resolve_n_max(const std::optional<int>& flag);

/// Minimizes Q for one state and prints value, direction, mode pair, method
/// and diagnostics. Returns 0; errors propagate to run_guarded.
int run_point(const TwoModeState& state, const std::optional<int>& n_max,
              bool cross_check, std::ostream& out);

/// Reads a density-matrix text file, validates it and reports as run_point.
int run_custom(const std::string& path, std::ostream& out);

/// Evaluates the sweep and writes CSV/JSON to spec.output (or `out` when the
/// path is empty).
int run_sweep_command(const SweepSpec& spec, std::ostream& out);

struct ValidateRequest {
  std::string family;          ///< fock | squeezed-coherent | squeezed-thermal | superposition
  int points = 60;             ///< random parameter points (ignored for fock)
  int directions = 10;         ///< sphere directions per point
  int max_n = 4;               ///< fock: highest occupation per mode
  double tolerance = 1e-6;     ///< |closed form - oracle| admitted as match
  std::uint64_t seed = 20240817;
  std::string ledger_path;     ///< per-evaluation CSV report; empty skips it
  std::optional<int> n_max;    ///< oracle truncation override
};

/// Compares the family closed form against the truncated-operator oracle over
/// a deterministic parameter/direction grid. Prints every mismatch plus a
/// summary line; returns 0 when all points match, 4 otherwise.
int run_validate(const ValidateRequest& request, std::ostream& out);

/// Runs `body`, mapping library errors to the exit-code contract: 2 degenerate
/// input, 3 validation/parse, 4 numerical failure. Prints "error: ..." to
/// stderr on failure.
int run_guarded(const std::function<int()>& body);

}  // namespace mandelq::cli
