#pragma once

#include <complex>
#include <variant>

#include <Eigen/Dense>

namespace mandelq {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Per-mode Fock truncation. The two-mode basis |n1,n2> with n1,n2 in
/// [0, n_max] is ordered row-major: index(n1,n2) = n1*(n_max+1) + n2.
struct Cutoff {
  int n_max = 0;  ///< highest retained occupation per mode
  int pad = 0;    ///< extra levels for internal operator exponentials (0 = automatic)

  int mode_dim() const { return n_max + 1; }
  int dim() const { return mode_dim() * mode_dim(); }
  int index(int n1, int n2) const { return n1 * mode_dim() + n2; }
};

/// Dense operator on the truncated two-mode space (or on one mode where a
/// function documents it as single-mode).
using TruncatedOperator = Eigen::MatrixXcd;

// ---------------------------------------------------------------------------
// state families
// ---------------------------------------------------------------------------

/// Two-mode squeeze U0(a,b) applied to the coherent state |z1, z2>.
/// The per-mode squeeze parameters are r1 = (a-b)/2 and r2 = (a+b)/2.
struct SqueezedCoherent {
  Complex z1{0.0, 0.0};
  Complex z2{0.0, 0.0};
  double a = 0.0;
  double b = 0.0;
};

/// U0(a,b) applied to the two-mode thermal state at inverse temperature beta.
struct SqueezedThermal {
  double beta = 1.0;
  double a = 0.0;
  double b = 0.0;
};

/// Normalized |u1,u2> + r e^{i eta} |v1,v2> with real displacement amplitudes.
struct CoherentSuperposition {
  double u1 = 0.0;
  double u2 = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  double r = 1.0;
  double eta = 0.0;
};

/// Number state |n1, n2>.
struct Fock {
  int n1 = 0;
  int n2 = 0;
};

/// User-supplied density matrix on a truncated two-mode space.
struct ExplicitDensityMatrix {
  Cutoff cutoff;
  CMatrix rho;  ///< dim() x dim(), basis ordering per Cutoff::index
};

using TwoModeState = std::variant<SqueezedCoherent, SqueezedThermal,
                                  CoherentSuperposition, Fock,
                                  ExplicitDensityMatrix>;

/// Stable family identifier: "squeezed-coherent", "squeezed-thermal",
/// "superposition", "fock" or "explicit".
const char* family_name(const TwoModeState& state);

/// Truncation large enough to evaluate direct expectations of the state to
/// roughly 1e-9 absolute accuracy in Q (parametric families), or the state's
/// own truncation (explicit density matrices).
Cutoff default_cutoff(const TwoModeState& state);

}  // namespace mandelq
