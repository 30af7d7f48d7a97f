#include "mandelq/closed_forms.hpp"

#include <cmath>
#include <sstream>

#include "mandelq/errors.hpp"

namespace mandelq {

namespace {

constexpr const char* k_vacuum_message = "vacuum state: Q undefined (zero mean photon number)";

// Expansion of Q(theta, phi) for the squeezed coherent family. The squeeze
// parameters arrive pre-halved relative to the public (a, b) convention.
double squeezed_coherent_expansion(double u, double fu, double v, double fv,
                                   double a, double b, double theta, double phi) {
  using std::cos;
  using std::cosh;
  using std::pow;
  using std::sin;
  using std::sinh;
  const double ct = cos(theta);
  const double st = sin(theta);
  const double c2 = pow(cos(theta / 2), 2);
  const double s2 = pow(sin(theta / 2), 2);
  const double am = 2 * (a - b);
  const double ap = 2 * (a + b);

  const double intensity_bracket =
      -2 + cosh(am) + 2 * pow(u, 2) * cosh(am) + cosh(ap) + 2 * pow(v, 2) * cosh(ap) +
      2 * pow(u, 2) * cos(2 * fu) * sinh(am) + 2 * pow(v, 2) * cos(2 * fv) * sinh(ap);
  if (intensity_bracket <= 4e-12) throw ZeroIntensity(k_vacuum_message);
  const double den = 2.0 / intensity_bracket;

  double n = 0.0;
  n += (5 + pow(u, 4) + pow(v, 4) + 2 * (pow(u, 2) + pow(v, 2))) / 8;
  n += (pow(v, 4) * cos(4 * fv) * (-1 + ct)) / 8;
  n += ((pow(u, 2) - pow(v, 2)) * (2 + pow(u, 2) + pow(v, 2)) * ct) / 8;
  n -= (pow(u, 4) * cos(4 * fu) * (1 + ct)) / 8;
  n -= ((1 + pow(u, 2) * (2 + pow(u, 2) - pow(u, 2) * cos(4 * fu)) +
         pow(v, 2) * (2 + pow(v, 2) - pow(v, 2) * cos(4 * fv))) *
        pow(st, 2)) /
       16;
  n += (u * v * cosh(2 * a) *
        (-8 * cos(phi) * cos(fu - fv) -
         (2 + pow(u, 2) + pow(v, 2) + (pow(u, 2) - pow(v, 2)) * ct) * sin(phi) * sin(fu - fv) -
         pow(u, 2) * (1 + ct) * sin(phi) * sin(3 * fu + fv) +
         pow(v, 2) * (1 - ct) * sin(phi) * sin(fu + 3 * fv))) *
       st / 4;
  n += (u * v *
        (-8 * cos(phi) * cos(fu + fv) -
         (pow(u, 2) - pow(v, 2) + (2 + pow(u, 2) + pow(v, 2)) * ct) * sin(phi) * sin(fu + fv) -
         pow(v, 2) * (1 - ct) * sin(phi) * sin(fu - 3 * fv) -
         pow(u, 2) * (1 + ct) * sin(phi) * sin(3 * fu - fv)) *
        st * sinh(2 * a)) /
       4;
  n += (u * v * cosh(-2 * b) *
        (8 * sin(phi) * sin(fu - fv) * st +
         cos(phi) * cos(fu - fv) * (2 + pow(u, 2) + pow(v, 2) + (pow(u, 2) - pow(v, 2)) * ct) * st -
         cos(phi) * 2 * pow(u, 2) * cos(3 * fu + fv) * c2 * st -
         2 * pow(v, 2) * cos(phi) * cos(fu + 3 * fv) * s2 * st)) /
       4;
  n += (u * v *
        (pow(v, 2) * cos(phi) * cos(fu - 3 * fv) * (-1 + ct) +
         pow(u, 2) * cos(phi) * cos(3 * fu - fv) * (1 + ct) -
         cos(phi) * cos(fu + fv) * (pow(u, 2) - pow(v, 2) + (2 + pow(u, 2) + pow(v, 2)) * ct) -
         8 * sin(phi) * sin(fu + fv)) *
        st * sinh(-2 * b)) /
       4;
  n += (3 + 12 * pow(u, 2) + 6 * pow(u, 4) + 2 * pow(u, 4) * cos(4 * fu)) * pow(c2, 2) *
       cosh(2 * am) / 8;
  n += (3 + 12 * pow(v, 2) + 6 * pow(v, 4) + 2 * pow(v, 4) * cos(4 * fv)) * cosh(2 * ap) *
       pow(s2, 2) / 8;
  n += (pow(u, 2) * (3 + 2 * pow(u, 2)) * cos(2 * fu) * pow(c2, 2) * sinh(2 * am)) / 2;
  n += (pow(v, 2) * (3 + 2 * pow(v, 2)) * cos(2 * fv) * pow(s2, 2) * sinh(2 * ap)) / 2;
  n += cosh(am) * (-((1 + 2 * pow(u, 2)) * c2) +
                   pow(u, 2) * pow(v, 2) * cos(2 * fu) * sin(2 * phi) * sin(2 * fv) * pow(st, 2) / 2);
  n += cosh(ap) * (-((1 + 2 * pow(v, 2)) * s2) -
                   pow(u, 2) * pow(v, 2) * cos(2 * fv) * sin(2 * phi) * sin(2 * fu) * pow(st, 2) / 2);
  n += (-(pow(u, 2) * cos(2 * fu) * (1 + ct)) +
        (1 + 2 * pow(u, 2)) * pow(v, 2) * sin(2 * phi) * sin(2 * fv) * pow(st, 2) / 4) *
       sinh(am);
  n += (pow(v, 2) * cos(2 * fv) * (-1 + ct) -
        pow(u, 2) * (1 + 2 * pow(v, 2)) * sin(2 * phi) * sin(2 * fu) * pow(st, 2) / 4) *
       sinh(ap);
  n += (((1 + 2 * pow(u, 2)) * (1 + 2 * pow(v, 2)) +
         2 * pow(u, 2) * pow(v, 2) * cos(2 * phi) * cos(2 * fu) * cos(2 * fv)) *
        cosh(am) * cosh(ap) * pow(st, 2)) /
       4;
  n += ((4 * pow(u, 2) * (1 + 2 * pow(v, 2)) * cos(2 * fu) +
         2 * (1 + 2 * pow(u, 2)) * pow(v, 2) * cos(2 * phi) * cos(2 * fv)) *
        cosh(ap) * pow(st, 2) * sinh(am)) /
       8;
  n += (((1 + 2 * pow(u, 2)) * (1 + 2 * pow(v, 2)) * cos(2 * phi) +
         8 * pow(u, 2) * pow(v, 2) * cos(2 * fu) * cos(2 * fv)) *
        pow(st, 2) * sinh(am) * sinh(ap)) /
       8;
  n += ((2 * pow(u, 2) * (1 + 2 * pow(v, 2)) * cos(2 * phi) * cos(2 * fu) +
         4 * (1 + 2 * pow(u, 2)) * pow(v, 2) * cos(2 * fv)) *
        cosh(am) * pow(st, 2) * sinh(ap)) /
       8;
  n += (u * v * cos(phi) * (3 * (1 + pow(u, 2)) * cos(fu - fv) + pow(u, 2) * cos(3 * fu + fv)) *
        c2 * cosh(2 * (2 * a - b)) * st) /
       2;
  n += (u * v * cos(phi) * (pow(u, 2) * cos(3 * fu - fv) + 3 * (1 + pow(u, 2)) * cos(fu + fv)) *
        c2 * st * sinh(2 * (2 * a - b))) /
       2;
  n += (u * v * cos(phi) * (3 * (1 + pow(v, 2)) * cos(fu - fv) + pow(v, 2) * cos(fu + 3 * fv)) *
        cosh(2 * (2 * a + b)) * s2 * st) /
       2;
  n += (u * v * cos(phi) * (pow(v, 2) * cos(fu - 3 * fv) + 3 * (1 + pow(v, 2)) * cos(fu + fv)) *
        s2 * st * sinh(2 * (2 * a + b))) /
       2;
  n += (u * v * c2 * sin(phi) *
        (-(pow(u, 2) * sin(3 * fu - fv)) + 3 * (1 + pow(u, 2)) * sin(fu + fv)) * st *
        sinh(2 * (a - 2 * b))) /
       2;
  n += (u * v * sin(phi) * (pow(v, 2) * sin(fu - 3 * fv) + 3 * (1 + pow(v, 2)) * sin(fu + fv)) *
        s2 * st * sinh(-2 * (a + 2 * b))) /
       2;
  n -= (u * v * cosh(-2 * (a + 2 * b)) * sin(phi) *
        (3 * (1 + pow(v, 2)) * sin(fu - fv) + pow(v, 2) * sin(fu + 3 * fv)) * s2 * st) /
       2;
  n += (u * v * c2 * cosh(2 * (a - 2 * b)) * sin(phi) *
        (-3 * (1 + pow(u, 2)) * sin(fu - fv) + pow(u, 2) * sin(3 * fu + fv)) * st) /
       2;
  n += (pow(u, 2) * pow(v, 2) * cos(2 * phi) * sin(2 * fu) * sin(2 * fv) * pow(st, 2)) / 2;

  const double sq =
      -0.5 +
      (1 + ct) * ((1 + 2 * pow(u, 2)) * cosh(am) + 2 * pow(u, 2) * cos(2 * fu) * sinh(am)) / 4 +
      (1 - ct) * (cosh(ap) * (1 + 2 * pow(v, 2)) + 2 * pow(v, 2) * cos(2 * fv) * sinh(ap)) / 4 +
      u * v * st *
          (-sin(phi) * (cosh(-2 * b) * sin(fu - fv) - sin(fu + fv) * sinh(-2 * b)) +
           cos(phi) * (cos(fu - fv) * cosh(2 * a) + cos(fu + fv) * sinh(2 * a)));
  n -= sq * sq;
  return den * n;
}

}  // namespace

double q_fock(int n1, int n2, const SphereDirection& direction) {
  if (n1 < 0 || n2 < 0) {
    std::ostringstream os;
    os << "fock occupations must be non-negative, got (" << n1 << ", " << n2 << ")";
    throw ValidationError(os.str());
  }
  const double n = n1 + n2;
  if (n == 0.0) throw ZeroIntensity(k_vacuum_message);
  const Eigen::Vector3d& q = direction.q;
  const double planar = q(0) * q(0) + q(1) * q(1);
  const double num = n * n - 2.0 * n + (n1 * (1.0 - n1) + n2 * (1.0 - n2)) * planar -
                     2.0 * (n1 - n2) * q(2) - n * n * q(2) * q(2);
  return num / (4.0 * n);
}

double q_squeezed_thermal(double beta, double a, double b, const SphereDirection& direction) {
  if (!std::isfinite(beta) || beta <= 0.0) {
    std::ostringstream os;
    os << "inverse temperature must be positive and finite, got " << beta;
    throw InvalidTemperature(os.str());
  }
  const double nbar = 1.0 / std::expm1(beta);
  const double r1 = 0.5 * (a - b);
  const double r2 = 0.5 * (a + b);
  const double m1 = nbar * std::cosh(2.0 * r1) + std::sinh(r1) * std::sinh(r1);
  const double m2 = nbar * std::cosh(2.0 * r2) + std::sinh(r2) * std::sinh(r2);
  const double g1 = (nbar + 0.5) * std::sinh(2.0 * r1);
  const double g2 = (nbar + 0.5) * std::sinh(2.0 * r2);
  const double p = 0.25 * (g1 * g1 + g2 * g2 + 2.0 * m1 * m1 + 2.0 * m2 * m2);
  const double c = 0.5 * g1 * g2;
  const double dp = 0.25 * (g1 * g1 + 2.0 * m1 * m1 - g2 * g2 - 2.0 * m2 * m2);
  const double s = 0.5 * (m1 + m2);
  if (s < 1e-12) throw ZeroIntensity(k_vacuum_message);
  const double u3 = 0.5 * (m1 - m2);
  const Eigen::Vector3d& q = direction.q;
  const double q3 = q(2);
  const double linear = s + u3 * q3;
  const double num = p * (1.0 + q3 * q3) + c * (q(0) * q(0) - q(1) * q(1)) +
                     m1 * m2 * (1.0 - q3 * q3) + 2.0 * dp * q3 - linear * linear;
  return num / (2.0 * s);
}

double q_squeezed_coherent(double u, double phi_u, double v, double phi_v,
                           double a, double b, double theta, double phi) {
  for (double x : {u, phi_u, v, phi_v, a, b, theta, phi}) {
    if (!std::isfinite(x)) {
      throw ValidationError("squeezed coherent parameters must be finite");
    }
  }
  return squeezed_coherent_expansion(u, phi_u, v, phi_v, 0.5 * a, 0.5 * b, theta, phi);
}

double q_superposition(double u1, double u2, double v1, double r, double eta,
                       double theta, double phi) {
  if (!std::isfinite(r) || r < 0.0) {
    std::ostringstream os;
    os << "superposition weight r must be non-negative and finite, got " << r;
    throw InvalidWeight(os.str());
  }
  using std::cos;
  using std::exp;
  using std::pow;
  using std::sin;
  const double c2 = pow(cos(theta / 2), 2);
  const double s2 = pow(sin(theta / 2), 2);
  const double st = sin(theta);
  const double k = -0.5 * (u2 * u2 + (u1 - v1) * (u1 - v1));
  const double g = 1 + r * r + 2 * exp(k) * r * cos(eta);
  if (g <= 1e-18) {
    throw InvalidWeight("superposition branches cancel: no state left to normalize");
  }
  const double den =
      4 * (u1 * u1 + u2 * u2 + r * r * v1 * v1 +
           2 * exp(-0.5 * (u1 * u1 + u2 * u2 + v1 * v1) + u1 * v1) * r * u1 * v1 * cos(eta));
  if (den <= 1e-11) throw ZeroIntensity(k_vacuum_message);
  const double ta = 4 * (pow(u1, 4) + r * r * pow(v1, 4)) * c2 * c2 + 4 * pow(u2, 4) * s2 * s2 +
                    8 * pow(u1, 3) * u2 * c2 * cos(phi) * st +
                    8 * u1 * pow(u2, 3) * cos(phi) * s2 * st +
                    2 * u1 * u1 * u2 * u2 * (2 + cos(2 * phi)) * st * st;
  const double f = r * (exp(k) * (1 + r * r) + 2 * exp(2 * k) * r * cos(eta));
  const double tb = 8 * u1 * u1 * v1 * v1 * c2 * c2 * cos(eta) +
                    8 * u1 * u2 * v1 * v1 * c2 * cos(eta + phi) * st +
                    2 * u2 * u2 * v1 * v1 * cos(eta + 2 * phi) * st * st;
  const double pref = exp(k);
  const double s = 2 * (u1 * u1 + r * r * v1 * v1) * c2 + 2 * u2 * u2 * s2 +
                   2 * u1 * u2 * cos(phi) * st +
                   pref * r * (4 * u1 * v1 * c2 * cos(eta) + 2 * u2 * v1 * cos(eta + phi) * st);
  const double bracket = g * ta + f * tb - s * s;
  return bracket / (den * g);
}

bool has_closed_form(const TwoModeState& state) {
  return std::visit(
      [](const auto& st) -> bool {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, CoherentSuperposition>) return st.v2 == 0.0;
        return !std::is_same_v<T, ExplicitDensityMatrix>;
      },
      state);
}

double closed_form_q(const TwoModeState& state, const SphereDirection& direction) {
  return std::visit(
      [&](const auto& st) -> double {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, Fock>) {
          return q_fock(st.n1, st.n2, direction);
        } else if constexpr (std::is_same_v<T, SqueezedThermal>) {
          return q_squeezed_thermal(st.beta, st.a, st.b, direction);
        } else if constexpr (std::is_same_v<T, SqueezedCoherent>) {
          return q_squeezed_coherent(std::abs(st.z1), std::arg(st.z1), std::abs(st.z2),
                                     std::arg(st.z2), st.a, st.b, direction.theta,
                                     direction.phi);
        } else if constexpr (std::is_same_v<T, CoherentSuperposition>) {
          if (st.v2 != 0.0) {
            throw ValidationError(
                "no closed form for superpositions with a second displaced component in "
                "mode 2 (v2 != 0)");
          }
          return q_superposition(st.u1, st.u2, st.v1, st.r, st.eta, direction.theta,
                                 direction.phi);
        } else {
          static_assert(std::is_same_v<T, ExplicitDensityMatrix>);
          throw ValidationError("no closed form for explicit density matrices");
        }
      },
      state);
}

ClosedFormReport validate_closed_form(const TwoModeState& state,
                                      const SphereDirection& direction,
                                      const ValidateOptions& options) {
  ClosedFormReport report;
  report.value = closed_form_q(state, direction);
  if (!options.run_oracle) return report;
  const Cutoff cutoff = options.cutoff ? *options.cutoff : default_cutoff(state);
  const SU2Element alpha = alpha_of_q(direction);
  report.oracle_value =
      mandel_q_direct_checked(state, alpha, cutoff, options.convergence_tol);
  report.abs_diff = std::abs(report.value - *report.oracle_value);
  report.verdict = *report.abs_diff <= options.tolerance ? Verdict::Match : Verdict::Mismatch;
  return report;
}

}  // namespace mandelq
