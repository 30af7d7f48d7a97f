#pragma once

#include "mandelq/types.hpp"

namespace mandelq {

/// Intensity floor: mean photon numbers at or below this make Q undefined.
inline constexpr double k_intensity_floor = 1e-12;

/// Passive mode mixture a(alpha) = conj(alpha1) a1 + conj(alpha2) a2 with
/// |alpha1|^2 + |alpha2|^2 = 1.
struct SU2Element {
  Complex alpha1{1.0, 0.0};
  Complex alpha2{0.0, 0.0};
};

/// Unit direction on the mixing sphere together with its polar angles:
/// theta = atan2(hypot(q1,q2), q3) in [0,pi], phi in [0,2pi) and set to 0 at
/// the poles (|q3| = 1).
struct SphereDirection {
  Eigen::Vector3d q{0.0, 0.0, 1.0};
  double theta = 0.0;
  double phi = 0.0;
};

/// Normalizes q and derives the angles (pole convention above).
SphereDirection sphere_direction(const Eigen::Vector3d& q);
/// Builds q = (sin t cos p, sin t sin p, cos t) and canonicalizes the angles.
SphereDirection sphere_direction(double theta, double phi);

/// Coefficients of a(alpha)^2 = lambda . B: a complex null vector
/// (lambda . lambda = 0) of squared norm 2.
struct LambdaVector {
  Eigen::Vector3cd lambda;
};

/// q = (2 Re(conj(alpha1) alpha2), 2 Im(conj(alpha1) alpha2), |alpha1|^2 - |alpha2|^2).
SphereDirection q_of_alpha(const SU2Element& alpha);

/// alpha = (cos(theta/2), e^{i phi} sin(theta/2)); right inverse of q_of_alpha.
SU2Element alpha_of_q(const SphereDirection& direction);

/// lambda = (c1^2 - c2^2, -i(c1^2 + c2^2), -2 c1 c2) with c_k = conj(alpha_k).
LambdaVector lambda_of_alpha(const SU2Element& alpha);

/// Scalar reduction of a state: everything Q(rho; alpha) depends on.
///   T_rs = <a_r^dag a_s>,  s = Re tr(T)/2,  u_k = Re tr(T^t sigma_k)/2,
///   H_jk = 4 <B_j^dag B_k>,  R = Re H,  v = (Im H_12, Im H_20, Im H_01)
/// (0-based indices; v is the axial part of the antisymmetric Im H).
struct MomentSummary {
  double s = 0.0;
  Eigen::Vector3d u = Eigen::Vector3d::Zero();
  Eigen::Matrix3d R = Eigen::Matrix3d::Zero();
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  Eigen::Matrix3cd H = Eigen::Matrix3cd::Zero();
};

/// Moment summary of a state. The single-argument form evaluates parametric
/// families in closed form (exact) and reduces explicit density matrices by
/// operator traces at their own truncation. The cutoff form is the fully
/// numerical path: the state is materialized in the truncated Fock space and
/// reduced by operator traces there (explicit densities must carry the same
/// n_max).
MomentSummary extract_moments(const TwoModeState& state, const Cutoff& cutoff);
MomentSummary extract_moments(const TwoModeState& state);

/// Q(rho; alpha) at direction q from the moment summary:
///   Q = [tr R - q.R q + 2 v.q - 4 (s + u.q)^2] / (8 s).
/// Throws ZeroIntensity when s <= the intensity floor.
double mandel_q_at(const MomentSummary& moments, const SphereDirection& direction);

/// Q(rho; alpha) evaluated directly from truncated operator expectations of
/// a(alpha): (<adag^2 a^2> - <adag a>^2) / <N>.
double mandel_q_direct(const TwoModeState& state, const SU2Element& alpha,
                       const Cutoff& cutoff);
double mandel_q_direct(const TwoModeState& state, const SU2Element& alpha);

/// As mandel_q_direct but recomputed at n_max + 4: returns the refined value,
/// or throws CutoffTooSmall when the two differ by tol or more. Explicit
/// density matrices are evaluated as given (their truncation is the state).
double mandel_q_direct_checked(const TwoModeState& state, const SU2Element& alpha,
                               const Cutoff& cutoff, double tol = 1e-7);

/// Variant normalized by the mode intensity <a(alpha)^dag a(alpha)> instead
/// of <N>; throws ZeroModeIntensity when that intensity is at the floor.
double mandel_q_covariant_denominator(const TwoModeState& state,
                                      const SU2Element& alpha,
                                      const Cutoff& cutoff);
double mandel_q_covariant_denominator(const TwoModeState& state,
                                      const SU2Element& alpha);

}  // namespace mandelq
