#pragma once

#include <array>
#include <utility>

#include "mandelq/types.hpp"

namespace mandelq {

/// Two-mode annihilation operators (a1, a2) = (a (x) I, I (x) a).
std::pair<TruncatedOperator, TruncatedOperator> ladder_operators(const Cutoff& cutoff);

/// Number-conserving generators {J0, J1, J2, J3}: J0 = (N + 1)/2 and
/// J_k = (1/2) sum_{rs} a_r^dag (sigma_k)_{rs} a_s. All Hermitian; the su(2)
/// commutators hold exactly on the shells n1+n2 <= n_max.
std::array<TruncatedOperator, 4> number_conserving_generators(const Cutoff& cutoff);

/// Pair-lowering combinations B1 = (a1^2 - a2^2)/2, B2 = i(a1^2 + a2^2)/2,
/// B3 = -a1 a2. These satisfy a(alpha)^2 = lambda(alpha) . B as matrices.
std::array<TruncatedOperator, 3> pair_lowering_operators(const Cutoff& cutoff);

/// Hermitian noncompact generators K_j = (B_j + B_j^dag)/2 and
/// L_j = (B_j - B_j^dag)/(2i); [K1, L1] = i J0 on the shells n1+n2 <= n_max-2.
struct NoncompactGenerators {
  std::array<TruncatedOperator, 3> K;
  std::array<TruncatedOperator, 3> L;
};
NoncompactGenerators noncompact_generators(const Cutoff& cutoff);

/// Normalized truncated coherent state |z1, z2>. Throws CutoffTooSmall when
/// the discarded Poisson tail weighs 1e-12 or more.
CVector coherent_state(Complex z1, Complex z2, const Cutoff& cutoff);

/// Two-mode squeeze U0(a,b) = S(r1) (x) S(r2) with S(r) = exp[(r/2)(adag^2 - a^2)],
/// r1 = (a-b)/2, r2 = (a+b)/2. Each factor is exponentiated at n_max + pad
/// levels and projected back; the pad grows (at most 3 retries) until the
/// projected factor passes a unitarity-defect check on its trusted leading
/// columns (see single_mode_squeeze), else ConvergenceFailure. Columns beyond
/// the trusted range carry ordinary truncation error.
TruncatedOperator squeeze_operator(double a, double b, const Cutoff& cutoff);

/// Pad used by squeeze_operator when cutoff.pad == 0.
int default_squeeze_pad(double a, double b);

/// Normalized thermal density at inverse temperature beta > 0. Throws
/// CutoffTooSmall when the discarded geometric tail weighs 1e-12 or more.
CMatrix thermal_density(double beta, const Cutoff& cutoff);

/// Normalized truncated |u1,u2> + r e^{i eta} |v1,v2>.
CVector superposition_state(const CoherentSuperposition& state, const Cutoff& cutoff);

/// Basis vector |n1, n2>; occupation indices must lie within the cutoff.
CVector fock_state(int n1, int n2, const Cutoff& cutoff);

/// U0(a,b) psi and U0(a,b) rho U0(a,b)^dag (no renormalization).
CVector apply_squeeze(const CVector& psi, double a, double b, const Cutoff& cutoff);
CMatrix apply_squeeze(const CMatrix& rho, double a, double b, const Cutoff& cutoff);

/// Tr(rho op) and <psi| op |psi>.
Complex expectation(const CMatrix& rho, const CMatrix& op);
Complex expectation(const CVector& psi, const CMatrix& op);

/// exp(i sum_{rs} h_rs a_r^dag a_s) for Hermitian 2x2 h: a passive mode mixer
/// W with W rho W^dag exact on states supported on the shells n1+n2 <= n_max.
TruncatedOperator passive_rotation(const Eigen::Matrix2cd& h, const Cutoff& cutoff);

// ---------------------------------------------------------------------------
// single-mode building blocks (used by the expectation backends and tests)
// ---------------------------------------------------------------------------

/// Truncated amplitudes <n|z>, n = 0..dim-1, not renormalized.
CVector single_mode_coherent_amplitudes(Complex z, int dim);

/// S(r) = exp[(r/2)(adag^2 - a^2)] at n_max + pad levels projected to
/// (n_max+1) x (n_max+1); pad <= 0 selects the automatic policy. Real output
/// (the generator is real). Squeezing |m> stretches its occupation to about
/// m e^{2|r|}, so only the leading columns with images inside the truncation
/// can be orthonormal: those are gated at defect 1e-8 with pad growth on
/// failure; later columns carry ordinary truncation error.
Eigen::MatrixXd single_mode_squeeze(double r, int n_max, int pad = 0);

/// S(r) applied to a single-mode amplitude vector by scaled Taylor stepping
/// of the banded generator; O(dim) memory, suited to dims in the thousands.
CVector single_mode_squeeze_apply(double r, const CVector& amplitudes);

}  // namespace mandelq
