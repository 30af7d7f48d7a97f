#pragma once

#include <functional>
#include <limits>
#include <optional>

#include "mandelq/moments.hpp"

namespace mandelq {

/// Q restricted to the unit sphere: Q(q) = scale * (q^t A q + b.q + c) with
///   A = -R - 4 u u^t,  b = 2v - 8s u,  c = tr R - 4 s^2,  scale = 1/(8s).
struct SphereQuadratic {
  Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  double c = 0.0;
  double scale = 1.0;
};

/// Throws ZeroIntensity when s is at the intensity floor.
SphereQuadratic reduce_to_sphere_quadratic(const MomentSummary& moments);

enum class MinimizeMethod { SecularExact, GridRefine };

struct QResult {
  double q_min = 0.0;         ///< scaled minimum value
  SphereDirection q_bar;      ///< arg min direction
  SU2Element alpha_bar;       ///< alpha_of_q(q_bar)
  MinimizeMethod method = MinimizeMethod::SecularExact;

  // diagnostics
  double multiplier = std::numeric_limits<double>::quiet_NaN();    ///< secular mu
  double stationarity = std::numeric_limits<double>::quiet_NaN();  ///< ||(A - mu) q + b/2||
  bool hard_case = false;   ///< minimizer gained a free bottom-eigenspace component
  bool degenerate = false;  ///< a distinct minimizer lies within 1e-9 in value
  int grid_theta = 0;       ///< scan resolution (GridRefine only)
  int grid_phi = 0;
  int refine_iterations = 0;
};

/// Global minimum of the sphere-restricted quadratic via the secular equation
/// of (A - mu I) q = -b/2, mu <= lambda_min(A). Exact up to root-finding
/// tolerance; certificates: stationarity residual and multiplier bound.
QResult minimize_sphere_quadratic(const SphereQuadratic& quadratic);

struct GridConfig {
  int n_theta = 181;          ///< theta scan points on [0, pi], inclusive
  int n_phi = 360;            ///< phi scan points on [0, 2pi), endpoint excluded
  double refine_tol = 1e-10;  ///< local-polish simplex diameter target
  int max_iter = 200;         ///< polish iteration cap per start
};

/// Dense scan of objective(theta, phi) followed by a local polish of the five
/// best separated cells. Deterministic; ties broken by smallest theta, then phi.
QResult minimize_grid(const std::function<double(double, double)>& objective,
                      const GridConfig& config = {});

struct InvariantOptions {
  std::optional<Cutoff> cutoff;        ///< explicit-density truncation override
  bool cross_check_closed_form = true; ///< grid-minimize the family closed form too
  double cross_check_tol = 2e-6;
  GridConfig cross_check_grid = {};
};

/// The invariant Mandel parameter: moment reduction plus secular minimization
/// for every family; when a validated closed form exists (and cross-checking
/// is on), its grid minimum must agree within cross_check_tol or
/// ClosedFormMismatch is thrown. The result always satisfies
/// q_min <= Q at 26 fixed probe directions (axes, edge and corner diagonals).
QResult invariant_mandel_q(const TwoModeState& state, const InvariantOptions& options = {});

}  // namespace mandelq
