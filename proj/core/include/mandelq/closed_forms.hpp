#pragma once

#include <optional>

#include "mandelq/moments.hpp"

namespace mandelq {

/// Q for |n1, n2> at direction q:
///   [n^2 - 2n + (n1(1-n1) + n2(1-n2))(q1^2 + q2^2) - 2(n1-n2) q3 - n^2 q3^2] / (4n)
/// with n = n1 + n2. Throws ZeroIntensity for the vacuum.
double q_fock(int n1, int n2, const SphereDirection& direction);

/// Q for the squeezed thermal state at direction q, evaluated from the exact
/// Gaussian moments. Throws InvalidTemperature for beta <= 0.
double q_squeezed_thermal(double beta, double a, double b, const SphereDirection& direction);

/// Q for the squeezed coherent state with z1 = u e^{i phi_u}, z2 = v e^{i phi_v},
/// as an explicit trigonometric/hyperbolic expansion in the direction angles.
/// Throws ZeroIntensity when the mean photon number vanishes (u = v = a = b = 0).
double q_squeezed_coherent(double u, double phi_u, double v, double phi_v,
                           double a, double b, double theta, double phi);

/// Q for the superposition |u1,u2> + r e^{i eta} |v1, 0> (real amplitudes,
/// v2 = 0), as an explicit expansion in the direction angles. Throws
/// ZeroIntensity when all displacements vanish, InvalidWeight for r < 0.
double q_superposition(double u1, double u2, double v1, double r, double eta,
                       double theta, double phi);

enum class Verdict { Match, Mismatch, Unchecked };

struct ClosedFormReport {
  double value = 0.0;                  ///< closed-form Q
  std::optional<double> oracle_value;  ///< direct truncated-operator Q
  std::optional<double> abs_diff;
  Verdict verdict = Verdict::Unchecked;
};

struct ValidateOptions {
  double tolerance = 1e-6;        ///< |closed form - oracle| admitted as Match
  double convergence_tol = 1e-7;  ///< oracle cutoff recheck threshold
  bool run_oracle = true;         ///< false: evaluate only, verdict Unchecked
  std::optional<Cutoff> cutoff;   ///< oracle truncation override
};

/// True when a validated closed form is shipped for this state (all
/// parametric families; superpositions require v2 = 0).
bool has_closed_form(const TwoModeState& state);

/// Dispatches to the family closed form at the given direction.
/// Throws ValidationError when the family has no closed form.
double closed_form_q(const TwoModeState& state, const SphereDirection& direction);

/// Evaluates the family closed form at the given direction and, unless
/// disabled, compares it against the convergence-checked direct oracle.
/// Throws ValidationError when the family has no closed form.
ClosedFormReport validate_closed_form(const TwoModeState& state,
                                      const SphereDirection& direction,
                                      const ValidateOptions& options = {});

}  // namespace mandelq
