#include "mandelq/moments.hpp"

#include <Eigen/Sparse>

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

#include "mandelq/errors.hpp"
#include "mandelq/fock.hpp"

namespace mandelq {

namespace {

using SparseOp = Eigen::SparseMatrix<Complex>;

constexpr Complex k_i{0.0, 1.0};

std::pair<Complex, Complex> normalized_alpha(const SU2Element& alpha) {
  const double n = std::sqrt(std::norm(alpha.alpha1) + std::norm(alpha.alpha2));
  if (!(n > 1e-15)) {
    throw ValidationError("mode amplitude pair (alpha1, alpha2) must be nonzero");
  }
  return {alpha.alpha1 / n, alpha.alpha2 / n};
}

double wrap_azimuth(double phi) {
  if (phi < 0.0) phi += 2.0 * M_PI;
  if (phi >= 2.0 * M_PI) phi -= 2.0 * M_PI;
  return phi + 0.0;  // fold -0 to +0
}

// ---------------------------------------------------------------------------
// Shift application of mode lowering operators on two-mode kets / densities.
// ---------------------------------------------------------------------------

CVector apply_lowering(const CVector& psi, const Cutoff& cutoff, int mode) {
  const int d = cutoff.mode_dim();
  CVector out = CVector::Zero(psi.size());
  if (mode == 1) {
    for (int n1 = 0; n1 + 1 < d; ++n1) {
      const double amp = std::sqrt(static_cast<double>(n1 + 1));
      for (int n2 = 0; n2 < d; ++n2) {
        out(cutoff.index(n1, n2)) = amp * psi(cutoff.index(n1 + 1, n2));
      }
    }
  } else {
    for (int n1 = 0; n1 < d; ++n1) {
      for (int n2 = 0; n2 + 1 < d; ++n2) {
        out(cutoff.index(n1, n2)) = std::sqrt(static_cast<double>(n2 + 1)) *
                                    psi(cutoff.index(n1, n2 + 1));
      }
    }
  }
  return out;
}

double mean_total_number(const CVector& psi, const Cutoff& cutoff) {
  const int d = cutoff.mode_dim();
  double acc = 0.0;
  for (int n1 = 0; n1 < d; ++n1) {
    for (int n2 = 0; n2 < d; ++n2) {
      acc += (n1 + n2) * std::norm(psi(cutoff.index(n1, n2)));
    }
  }
  return acc;
}

SparseOp sparse_mode_lowering(const Cutoff& cutoff, int mode) {
  const int d = cutoff.mode_dim();
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(static_cast<std::size_t>(d) * d);
  for (int n1 = 0; n1 < d; ++n1) {
    for (int n2 = 0; n2 < d; ++n2) {
      if (mode == 1 && n1 + 1 < d) {
        trips.emplace_back(cutoff.index(n1, n2), cutoff.index(n1 + 1, n2),
                           std::sqrt(static_cast<double>(n1 + 1)));
      }
      if (mode == 2 && n2 + 1 < d) {
        trips.emplace_back(cutoff.index(n1, n2), cutoff.index(n1, n2 + 1),
                           std::sqrt(static_cast<double>(n2 + 1)));
      }
    }
  }
  SparseOp a(cutoff.dim(), cutoff.dim());
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

std::array<SparseOp, 3> sparse_pair_lowering(const SparseOp& a1, const SparseOp& a2) {
  const SparseOp a1sq = a1 * a1;
  const SparseOp a2sq = a2 * a2;
  return {
      SparseOp(0.5 * (a1sq - a2sq)),
      SparseOp(0.5 * k_i * (a1sq + a2sq)),
      SparseOp(-(a1 * a2)),
  };
}

// Tr(X^dag M) where X is sparse and M dense.
Complex adjoint_trace(const SparseOp& x, const CMatrix& m) {
  Complex acc(0.0, 0.0);
  for (int col = 0; col < x.outerSize(); ++col) {
    for (SparseOp::InnerIterator it(x, col); it; ++it) {
      acc += std::conj(it.value()) * m(it.row(), it.col());
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Per-mode normally ordered moments m[p][q] = <adag^p a^q>, p,q <= 2.
// ---------------------------------------------------------------------------

using ModeMoments = std::array<std::array<Complex, 3>, 3>;

double falling(int n, int k) {
  double f = 1.0;
  for (int j = 0; j < k; ++j) f *= static_cast<double>(n - j);
  return f;
}

ModeMoments mode_moments(const CVector& phi) {
  const int d = static_cast<int>(phi.size());
  ModeMoments m{};
  for (int p = 0; p <= 2; ++p) {
    for (int q = 0; q <= 2; ++q) {
      Complex acc(0.0, 0.0);
      for (int n = q; n < d; ++n) {
        const int t = n - q + p;
        if (t >= d) continue;
        acc += std::conj(phi(t)) * std::sqrt(falling(n, q) * falling(t, p)) * phi(n);
      }
      m[p][q] = acc;
    }
  }
  return m;
}

void accumulate_mode_moments(ModeMoments& m, const Eigen::VectorXd& phi, double weight) {
  const int d = static_cast<int>(phi.size());
  for (int p = 0; p <= 2; ++p) {
    for (int q = 0; q <= 2; ++q) {
      double acc = 0.0;
      for (int n = q; n < d; ++n) {
        const int t = n - q + p;
        if (t >= d) continue;
        acc += phi(t) * std::sqrt(falling(n, q) * falling(t, p)) * phi(n);
      }
      m[p][q] += weight * acc;
    }
  }
}

struct DirectExpectations {
  double mode_pair = 0.0;    // <Adag A>
  double pair_pair = 0.0;    // <Adag^2 A^2>
  double total_number = 0.0; // <N>
};

DirectExpectations product_expectations(const ModeMoments& m1, const ModeMoments& m2,
                                        Complex c1, Complex c2) {
  const std::array<Complex, 3> k = {c1 * c1, 2.0 * c1 * c2, c2 * c2};
  Eigen::Matrix3cd g;
  g(0, 0) = m1[2][2];
  g(1, 1) = m1[1][1] * m2[1][1];
  g(2, 2) = m2[2][2];
  g(0, 1) = m1[2][1] * m2[0][1];
  g(0, 2) = m1[2][0] * m2[0][2];
  g(1, 2) = m1[1][0] * m2[1][2];
  g(1, 0) = std::conj(g(0, 1));
  g(2, 0) = std::conj(g(0, 2));
  g(2, 1) = std::conj(g(1, 2));
  Complex quartic(0.0, 0.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      quartic += std::conj(k[i]) * k[j] * g(i, j);
    }
  }
  DirectExpectations e;
  e.pair_pair = quartic.real();
  e.mode_pair = std::norm(c1) * m1[1][1].real() + std::norm(c2) * m2[1][1].real() +
                2.0 * (std::conj(c1) * c2 * m1[1][0] * m2[0][1]).real();
  e.total_number = m1[1][1].real() + m2[1][1].real();
  return e;
}

DirectExpectations vector_expectations(const CVector& psi, const Cutoff& cutoff,
                                       Complex c1, Complex c2) {
  const CVector lowered = c1 * apply_lowering(psi, cutoff, 1) + c2 * apply_lowering(psi, cutoff, 2);
  const CVector twice =
      c1 * apply_lowering(lowered, cutoff, 1) + c2 * apply_lowering(lowered, cutoff, 2);
  DirectExpectations e;
  e.mode_pair = lowered.squaredNorm();
  e.pair_pair = twice.squaredNorm();
  e.total_number = mean_total_number(psi, cutoff);
  return e;
}

DirectExpectations density_expectations(const CMatrix& rho, const Cutoff& cutoff,
                                        Complex c1, Complex c2) {
  if (rho.rows() != cutoff.dim() || rho.cols() != cutoff.dim()) {
    std::ostringstream os;
    os << "density is " << rho.rows() << "x" << rho.cols() << ", cutoff dim is "
       << cutoff.dim();
    throw DimensionMismatch(os.str());
  }
  const SparseOp a1 = sparse_mode_lowering(cutoff, 1);
  const SparseOp a2 = sparse_mode_lowering(cutoff, 2);
  const SparseOp mixed = c1 * a1 + c2 * a2;
  const SparseOp mixed_sq = SparseOp(mixed * mixed);
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) throw ValidationError("density has non-positive trace");
  const CMatrix m1 = mixed * rho;
  const CMatrix m2 = mixed_sq * rho;
  DirectExpectations e;
  e.mode_pair = adjoint_trace(mixed, m1).real() / tr;
  e.pair_pair = adjoint_trace(mixed_sq, m2).real() / tr;
  double number = 0.0;
  const int d = cutoff.mode_dim();
  for (int n1 = 0; n1 < d; ++n1) {
    for (int n2 = 0; n2 < d; ++n2) {
      number += (n1 + n2) * rho(cutoff.index(n1, n2), cutoff.index(n1, n2)).real();
    }
  }
  e.total_number = number / tr;
  return e;
}

// ---------------------------------------------------------------------------
// Cached squeezed number-ladder columns for the mixed-state product path.
// ---------------------------------------------------------------------------

// Columns S(r)|n>, n = 0..count-1, held in `dim` levels. Exactly these columns
// feed the thermal mixture, so orthonormality is gated over them alone: a
// defect means the squeezed ladder spread past the truncation.
std::shared_ptr<const Eigen::MatrixXd> cached_squeezed_ladder(double r, int dim, int count) {
  using Key = std::tuple<std::int64_t, int, int>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const Eigen::MatrixXd>> cache;
  const Key key{std::bit_cast<std::int64_t>(r), dim, count};
  {
    const std::lock_guard<std::mutex> lock(mu);
    if (const auto it = cache.find(key); it != cache.end()) return it->second;
  }
  Eigen::MatrixXd cols = Eigen::MatrixXd::Zero(dim, count);
  if (r == 0.0) {
    cols.diagonal().setOnes();
  } else {
    for (int n = 0; n < count; ++n) {
      CVector e = CVector::Zero(dim);
      e(n) = 1.0;
      cols.col(n) = single_mode_squeeze_apply(r, e).real();
    }
  }
  const Eigen::MatrixXd gram = cols.transpose() * cols;
  const double defect =
      (gram - Eigen::MatrixXd::Identity(count, count)).cwiseAbs().maxCoeff();
  if (defect > 1e-8) {
    std::ostringstream os;
    os << "squeezed number ladder (r = " << r << ", " << count << " columns in " << dim
       << " levels) has orthonormality defect " << defect
       << ": it spreads past the cutoff; increase n_max";
    throw CutoffTooSmall(os.str());
  }
  auto s = std::make_shared<const Eigen::MatrixXd>(std::move(cols));
  const std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(s)).first->second;
}

ModeMoments squeezed_coherent_mode(Complex z, double r, int mode_dim) {
  CVector phi = single_mode_coherent_amplitudes(z, mode_dim);
  phi = single_mode_squeeze_apply(r, phi);
  const double kept = phi.squaredNorm();
  if (kept < 0.5) {
    std::ostringstream os;
    os << "squeezed coherent mode retains only weight " << kept
       << " inside the cutoff; increase n_max";
    throw CutoffTooSmall(os.str());
  }
  phi /= std::sqrt(kept);
  return mode_moments(phi);
}

ModeMoments squeezed_thermal_mode(double beta, double r, int mode_dim) {
  const int d = mode_dim;
  const double x = std::exp(-beta);
  const int ladder = static_cast<int>(std::ceil(30.0 / beta)) + 5;
  const int kept = std::min(ladder, d - 1);
  const double discarded = std::pow(x, kept + 1);
  if (discarded > 1e-10) {
    std::ostringstream os;
    os << "thermal ladder truncated at occupation " << kept << " discards weight "
       << discarded << "; increase n_max";
    throw CutoffTooSmall(os.str());
  }
  Eigen::VectorXd w(kept + 1);
  for (int n = 0; n <= kept; ++n) w(n) = std::pow(x, n);
  w /= w.sum();
  const auto cols = cached_squeezed_ladder(r, d, kept + 1);
  ModeMoments m{};
  for (int n = 0; n <= kept; ++n) {
    accumulate_mode_moments(m, cols->col(n), w(n));
  }
  return m;
}

DirectExpectations direct_expectations(const TwoModeState& state, const SU2Element& alpha,
                                       const Cutoff& cutoff) {
  const auto [a1, a2] = normalized_alpha(alpha);
  const Complex c1 = std::conj(a1);
  const Complex c2 = std::conj(a2);
  return std::visit(
      [&](const auto& st) -> DirectExpectations {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, Fock>) {
          return vector_expectations(fock_state(st.n1, st.n2, cutoff), cutoff, c1, c2);
        } else if constexpr (std::is_same_v<T, CoherentSuperposition>) {
          return vector_expectations(superposition_state(st, cutoff), cutoff, c1, c2);
        } else if constexpr (std::is_same_v<T, SqueezedCoherent>) {
          const int d = cutoff.mode_dim();
          const ModeMoments m1 = squeezed_coherent_mode(st.z1, 0.5 * (st.a - st.b), d);
          const ModeMoments m2 = squeezed_coherent_mode(st.z2, 0.5 * (st.a + st.b), d);
          return product_expectations(m1, m2, c1, c2);
        } else if constexpr (std::is_same_v<T, SqueezedThermal>) {
          if (!std::isfinite(st.beta) || st.beta <= 0.0) {
            std::ostringstream os;
            os << "inverse temperature must be positive and finite, got " << st.beta;
            throw InvalidTemperature(os.str());
          }
          const int d = cutoff.mode_dim();
          const ModeMoments m1 = squeezed_thermal_mode(st.beta, 0.5 * (st.a - st.b), d);
          const ModeMoments m2 = squeezed_thermal_mode(st.beta, 0.5 * (st.a + st.b), d);
          return product_expectations(m1, m2, c1, c2);
        } else {
          static_assert(std::is_same_v<T, ExplicitDensityMatrix>);
          return density_expectations(st.rho, st.cutoff, c1, c2);
        }
      },
      state);
}

// ---------------------------------------------------------------------------
// MomentSummary assembly helpers.
// ---------------------------------------------------------------------------

MomentSummary summary_from_pair_matrix(double s, const Eigen::Vector3d& u,
                                       Eigen::Matrix3cd h) {
  h = 0.5 * (h + h.adjoint()).eval();
  MomentSummary m;
  m.s = s;
  m.u = u;
  m.H = h;
  m.R = h.real();
  m.v = Eigen::Vector3d(h(1, 2).imag(), h(2, 0).imag(), h(0, 1).imag());
  return m;
}

MomentSummary summary_from_real_parts(double s, const Eigen::Vector3d& u,
                                      const Eigen::Matrix3d& r, const Eigen::Vector3d& v) {
  Eigen::Matrix3cd h = r.cast<Complex>();
  h(1, 2) += k_i * v(0);
  h(2, 1) -= k_i * v(0);
  h(2, 0) += k_i * v(1);
  h(0, 2) -= k_i * v(1);
  h(0, 1) += k_i * v(2);
  h(1, 0) -= k_i * v(2);
  MomentSummary m;
  m.s = s;
  m.u = u;
  m.R = r;
  m.v = v;
  m.H = h;
  return m;
}

MomentSummary fock_summary(const Fock& st) {
  const double n1 = st.n1;
  const double n2 = st.n2;
  const double f = n1 * (n1 - 1.0) + n2 * (n2 - 1.0);
  const double g2 = n1 * (n1 - 1.0) - n2 * (n2 - 1.0);
  Eigen::Matrix3d r = Eigen::Matrix3d::Zero();
  r(0, 0) = f;
  r(1, 1) = f;
  r(2, 2) = 4.0 * n1 * n2;
  return summary_from_real_parts(0.5 * (n1 + n2),
                                 Eigen::Vector3d(0.0, 0.0, 0.5 * (n1 - n2)), r,
                                 Eigen::Vector3d(0.0, 0.0, g2));
}

MomentSummary thermal_summary(const SqueezedThermal& st) {
  if (!std::isfinite(st.beta) || st.beta <= 0.0) {
    std::ostringstream os;
    os << "inverse temperature must be positive and finite, got " << st.beta;
    throw InvalidTemperature(os.str());
  }
  const double nbar = 1.0 / std::expm1(st.beta);
  const double r1 = 0.5 * (st.a - st.b);
  const double r2 = 0.5 * (st.a + st.b);
  const double m1 = nbar * std::cosh(2.0 * r1) + std::sinh(r1) * std::sinh(r1);
  const double m2 = nbar * std::cosh(2.0 * r2) + std::sinh(r2) * std::sinh(r2);
  const double g1 = (nbar + 0.5) * std::sinh(2.0 * r1);
  const double g2 = (nbar + 0.5) * std::sinh(2.0 * r2);
  const double p = 0.25 * (g1 * g1 + g2 * g2 + 2.0 * m1 * m1 + 2.0 * m2 * m2);
  const double c = 0.5 * g1 * g2;
  const double dp = 0.25 * (g1 * g1 + 2.0 * m1 * m1 - g2 * g2 - 2.0 * m2 * m2);
  Eigen::Matrix3d r = Eigen::Matrix3d::Zero();
  r(0, 0) = 4.0 * (p - c);
  r(1, 1) = 4.0 * (p + c);
  r(2, 2) = 4.0 * m1 * m2;
  return summary_from_real_parts(0.5 * (m1 + m2),
                                 Eigen::Vector3d(0.0, 0.0, 0.5 * (m1 - m2)), r,
                                 Eigen::Vector3d(0.0, 0.0, 4.0 * dp));
}

MomentSummary squeezed_coherent_summary(const SqueezedCoherent& st) {
  struct GaussMode {
    Complex mu;
    double m;
    Complex g;
    double quartic;   // <adag^2 a^2>
    Complex raised;   // <adag^2 a>
  };
  const auto mode = [](Complex z, double r) {
    GaussMode gm;
    const double ch = std::cosh(r);
    const double sh = std::sinh(r);
    gm.mu = z * ch + std::conj(z) * sh;
    gm.m = std::norm(z) * std::cosh(2.0 * r) + (z * z).real() * std::sinh(2.0 * r) + sh * sh;
    gm.g = z * z * ch * ch + std::conj(z) * std::conj(z) * sh * sh +
           (2.0 * std::norm(z) + 1.0) * ch * sh;
    const double nc = gm.m - std::norm(gm.mu);
    const Complex gc = gm.g - gm.mu * gm.mu;
    gm.quartic = std::norm(gm.mu) * std::norm(gm.mu) + 4.0 * std::norm(gm.mu) * nc +
                 2.0 * (std::conj(gm.mu) * std::conj(gm.mu) * gc).real() + 2.0 * nc * nc +
                 std::norm(gc);
    gm.raised = std::conj(gm.mu) * std::conj(gm.mu) * gm.mu + 2.0 * std::conj(gm.mu) * nc +
                gm.mu * std::conj(gc);
    return gm;
  };
  const GaussMode g1 = mode(st.z1, 0.5 * (st.a - st.b));
  const GaussMode g2 = mode(st.z2, 0.5 * (st.a + st.b));

  const Complex t01 = std::conj(g1.mu) * g2.mu;  // <a1dag a2>
  const double s = 0.5 * (g1.m + g2.m);
  const Eigen::Vector3d u(t01.real(), t01.imag(), 0.5 * (g1.m - g2.m));

  const Complex x12 = std::conj(g1.g) * g2.g;  // <a1dag^2 a2^2>
  const double a11 = g1.quartic;
  const double a22 = g2.quartic;
  Eigen::Matrix3cd bb = Eigen::Matrix3cd::Zero();
  bb(0, 0) = 0.25 * (a11 + a22 - 2.0 * x12.real());
  bb(1, 1) = 0.25 * (a11 + a22 + 2.0 * x12.real());
  bb(2, 2) = g1.m * g2.m;
  bb(0, 1) = 0.25 * (k_i * (a11 - a22) + k_i * (x12 - std::conj(x12)));
  bb(0, 2) = -0.5 * (g1.raised * g2.mu - g1.mu * g2.raised);
  bb(1, 2) = 0.5 * k_i * (g1.raised * g2.mu + g1.mu * g2.raised);
  bb(1, 0) = std::conj(bb(0, 1));
  bb(2, 0) = std::conj(bb(0, 2));
  bb(2, 1) = std::conj(bb(1, 2));
  return summary_from_pair_matrix(s, u, 4.0 * bb);
}

MomentSummary superposition_summary(const CoherentSuperposition& st) {
  if (!std::isfinite(st.r) || st.r < 0.0) {
    std::ostringstream os;
    os << "superposition weight r must be non-negative and finite, got " << st.r;
    throw InvalidWeight(os.str());
  }
  const Eigen::Vector2d u_amp(st.u1, st.u2);
  const Eigen::Vector2d v_amp(st.v1, st.v2);
  const Complex w = st.r * std::exp(k_i * st.eta);
  const double overlap =
      std::exp(-0.5 * (u_amp.squaredNorm() + v_amp.squaredNorm()) + u_amp.dot(v_amp));
  const Complex wov = w * overlap;
  const double nrm2 = 1.0 + std::norm(w) + 2.0 * wov.real();
  if (nrm2 <= 1e-18) {
    throw InvalidWeight("superposition branches cancel: no state left to normalize");
  }
  const auto mean = [&](auto&& f) -> Complex {
    return (f(u_amp, u_amp) + std::norm(w) * f(v_amp, v_amp) + wov * f(u_amp, v_amp) +
            std::conj(wov) * f(v_amp, u_amp)) /
           nrm2;
  };
  Eigen::Matrix2cd t;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      t(r, c) = mean([r, c](const Eigen::Vector2d& l, const Eigen::Vector2d& rt) {
        return Complex(l(r) * rt(c), 0.0);
      });
    }
  }
  const auto pair_amp = [](const Eigen::Vector2d& z) {
    return Eigen::Vector3cd(Complex(0.5 * (z(0) * z(0) - z(1) * z(1)), 0.0),
                            0.5 * k_i * (z(0) * z(0) + z(1) * z(1)),
                            Complex(-z(0) * z(1), 0.0));
  };
  Eigen::Matrix3cd h;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      h(j, k) = 4.0 * mean([&, j, k](const Eigen::Vector2d& l, const Eigen::Vector2d& rt) {
        return std::conj(pair_amp(l)(j)) * pair_amp(rt)(k);
      });
    }
  }
  const double s = 0.5 * (t(0, 0) + t(1, 1)).real();
  const Eigen::Vector3d u(0.5 * (t(1, 0) + t(0, 1)).real(),
                          0.5 * (k_i * (t(1, 0) - t(0, 1))).real(),
                          0.5 * (t(0, 0) - t(1, 1)).real());
  return summary_from_pair_matrix(s, u, h);
}

MomentSummary dense_vector_summary(const CVector& psi, const Cutoff& cutoff) {
  const CVector y1 = apply_lowering(psi, cutoff, 1);
  const CVector y2 = apply_lowering(psi, cutoff, 2);
  const CVector sq11 = apply_lowering(y1, cutoff, 1);
  const CVector sq12 = apply_lowering(y2, cutoff, 1);
  const CVector sq22 = apply_lowering(y2, cutoff, 2);
  const std::array<CVector, 3> b = {
      0.5 * (sq11 - sq22),
      0.5 * k_i * (sq11 + sq22),
      -sq12,
  };
  Eigen::Matrix2cd t;
  t(0, 0) = y1.dot(y1);
  t(0, 1) = y1.dot(y2);
  t(1, 0) = y2.dot(y1);
  t(1, 1) = y2.dot(y2);
  Eigen::Matrix3cd h;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      h(j, k) = 4.0 * b[j].dot(b[k]);
    }
  }
  const double s = 0.5 * (t(0, 0) + t(1, 1)).real();
  const Eigen::Vector3d u(0.5 * (t(1, 0) + t(0, 1)).real(),
                          0.5 * (k_i * (t(1, 0) - t(0, 1))).real(),
                          0.5 * (t(0, 0) - t(1, 1)).real());
  return summary_from_pair_matrix(s, u, h);
}

MomentSummary dense_density_summary(const CMatrix& rho, const Cutoff& cutoff) {
  if (rho.rows() != cutoff.dim() || rho.cols() != cutoff.dim()) {
    std::ostringstream os;
    os << "density is " << rho.rows() << "x" << rho.cols() << ", cutoff dim is "
       << cutoff.dim();
    throw DimensionMismatch(os.str());
  }
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) throw ValidationError("density has non-positive trace");
  const SparseOp a1 = sparse_mode_lowering(cutoff, 1);
  const SparseOp a2 = sparse_mode_lowering(cutoff, 2);
  const std::array<SparseOp, 2> a = {a1, a2};
  Eigen::Matrix2cd t;
  for (int s = 0; s < 2; ++s) {
    const CMatrix m = a[s] * rho;
    for (int r = 0; r < 2; ++r) {
      t(r, s) = adjoint_trace(a[r], m) / tr;
    }
  }
  const auto b = sparse_pair_lowering(a1, a2);
  Eigen::Matrix3cd h;
  for (int k = 0; k < 3; ++k) {
    const CMatrix m = b[k] * rho;
    for (int j = 0; j < 3; ++j) {
      h(j, k) = 4.0 * adjoint_trace(b[j], m) / tr;
    }
  }
  const double s = 0.5 * (t(0, 0) + t(1, 1)).real();
  const Eigen::Vector3d u(0.5 * (t(1, 0) + t(0, 1)).real(),
                          0.5 * (k_i * (t(1, 0) - t(0, 1))).real(),
                          0.5 * (t(0, 0) - t(1, 1)).real());
  return summary_from_pair_matrix(s, u, h);
}

}  // namespace

// ---------------------------------------------------------------------------
// Sphere parametrizations.
// ---------------------------------------------------------------------------

SphereDirection sphere_direction(const Eigen::Vector3d& q) {
  const double n = q.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ValidationError("sphere direction must be a nonzero finite vector");
  }
  SphereDirection dir;
  dir.q = q / n;
  const double planar = std::hypot(dir.q(0), dir.q(1));
  dir.theta = std::atan2(planar, dir.q(2));
  dir.phi = planar > 1e-15 ? wrap_azimuth(std::atan2(dir.q(1), dir.q(0))) : 0.0;
  return dir;
}

SphereDirection sphere_direction(double theta, double phi) {
  return sphere_direction(Eigen::Vector3d(std::sin(theta) * std::cos(phi),
                                          std::sin(theta) * std::sin(phi),
                                          std::cos(theta)));
}

SphereDirection q_of_alpha(const SU2Element& alpha) {
  const auto [a1, a2] = normalized_alpha(alpha);
  const Complex cross = std::conj(a1) * a2;
  return sphere_direction(
      Eigen::Vector3d(2.0 * cross.real(), 2.0 * cross.imag(), std::norm(a1) - std::norm(a2)));
}

SU2Element alpha_of_q(const SphereDirection& direction) {
  return {Complex(std::cos(0.5 * direction.theta), 0.0),
          std::exp(k_i * direction.phi) * std::sin(0.5 * direction.theta)};
}

LambdaVector lambda_of_alpha(const SU2Element& alpha) {
  const auto [a1, a2] = normalized_alpha(alpha);
  const Complex c1 = std::conj(a1);
  const Complex c2 = std::conj(a2);
  LambdaVector lam;
  lam.lambda = Eigen::Vector3cd(c1 * c1 - c2 * c2, -k_i * (c1 * c1 + c2 * c2),
                                -2.0 * c1 * c2);
  return lam;
}

// ---------------------------------------------------------------------------
// Moment extraction.
// ---------------------------------------------------------------------------

MomentSummary extract_moments(const TwoModeState& state) {
  return std::visit(
      [](const auto& st) -> MomentSummary {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, Fock>) {
          return fock_summary(st);
        } else if constexpr (std::is_same_v<T, SqueezedThermal>) {
          return thermal_summary(st);
        } else if constexpr (std::is_same_v<T, SqueezedCoherent>) {
          return squeezed_coherent_summary(st);
        } else if constexpr (std::is_same_v<T, CoherentSuperposition>) {
          return superposition_summary(st);
        } else {
          static_assert(std::is_same_v<T, ExplicitDensityMatrix>);
          return dense_density_summary(st.rho, st.cutoff);
        }
      },
      state);
}

MomentSummary extract_moments(const TwoModeState& state, const Cutoff& cutoff) {
  return std::visit(
      [&](const auto& st) -> MomentSummary {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, Fock>) {
          return dense_vector_summary(fock_state(st.n1, st.n2, cutoff), cutoff);
        } else if constexpr (std::is_same_v<T, CoherentSuperposition>) {
          return dense_vector_summary(superposition_state(st, cutoff), cutoff);
        } else if constexpr (std::is_same_v<T, SqueezedCoherent>) {
          const CVector base = coherent_state(st.z1, st.z2, cutoff);
          return dense_vector_summary(apply_squeeze(base, st.a, st.b, cutoff), cutoff);
        } else if constexpr (std::is_same_v<T, SqueezedThermal>) {
          const CMatrix base = thermal_density(st.beta, cutoff);
          return dense_density_summary(apply_squeeze(base, st.a, st.b, cutoff), cutoff);
        } else {
          static_assert(std::is_same_v<T, ExplicitDensityMatrix>);
          if (st.cutoff.n_max != cutoff.n_max) {
            std::ostringstream os;
            os << "explicit density carries n_max = " << st.cutoff.n_max
               << " but extraction was requested at n_max = " << cutoff.n_max;
            throw DimensionMismatch(os.str());
          }
          return dense_density_summary(st.rho, st.cutoff);
        }
      },
      state);
}

// ---------------------------------------------------------------------------
// Pointwise Q evaluation.
// ---------------------------------------------------------------------------

double mandel_q_at(const MomentSummary& moments, const SphereDirection& direction) {
  if (moments.s < k_intensity_floor) {
    throw ZeroIntensity("vacuum state: Q undefined (zero mean photon number)");
  }
  const Eigen::Vector3d& q = direction.q;
  const double linear = moments.s + moments.u.dot(q);
  const double num = moments.R.trace() - q.dot(moments.R * q) + 2.0 * moments.v.dot(q) -
                     4.0 * linear * linear;
  return num / (8.0 * moments.s);
}

double mandel_q_direct(const TwoModeState& state, const SU2Element& alpha,
                       const Cutoff& cutoff) {
  const DirectExpectations e = direct_expectations(state, alpha, cutoff);
  if (0.5 * e.total_number < k_intensity_floor) {
    throw ZeroIntensity("vacuum state: Q undefined (zero mean photon number)");
  }
  return (e.pair_pair - e.mode_pair * e.mode_pair) / e.total_number;
}

double mandel_q_direct(const TwoModeState& state, const SU2Element& alpha) {
  return mandel_q_direct(state, alpha, default_cutoff(state));
}

double mandel_q_direct_checked(const TwoModeState& state, const SU2Element& alpha,
                               const Cutoff& cutoff, double tolerance) {
  const double coarse = mandel_q_direct(state, alpha, cutoff);
  if (std::holds_alternative<ExplicitDensityMatrix>(state)) {
    return coarse;  // the density itself fixes the truncation
  }
  const Cutoff refined{cutoff.n_max + 4, cutoff.pad};
  const double fine = mandel_q_direct(state, alpha, refined);
  if (std::abs(fine - coarse) >= tolerance) {
    std::ostringstream os;
    os << "direct Q moved by " << std::abs(fine - coarse) << " when n_max grew from "
       << cutoff.n_max << " to " << refined.n_max << " (tolerance " << tolerance << ")";
    throw CutoffTooSmall(os.str());
  }
  return fine;
}

double mandel_q_covariant_denominator(const TwoModeState& state, const SU2Element& alpha,
                                      const Cutoff& cutoff) {
  const DirectExpectations e = direct_expectations(state, alpha, cutoff);
  if (e.mode_pair < 1e-12) {
    throw ZeroModeIntensity("selected mode has zero intensity: covariant Q undefined");
  }
  return (e.pair_pair - e.mode_pair * e.mode_pair) / e.mode_pair;
}

double mandel_q_covariant_denominator(const TwoModeState& state, const SU2Element& alpha) {
  return mandel_q_covariant_denominator(state, alpha, default_cutoff(state));
}

}  // namespace mandelq
