#include "mandelq/minimizer.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "mandelq/closed_forms.hpp"
#include "mandelq/errors.hpp"

namespace mandelq {

namespace {

// Brent's method on a bracketing interval [xa, xb]: bisection interleaved
// with secant / inverse quadratic steps, accepted only when they shrink the
// interval fast enough.
template <typename F>
double brent_root(F&& f, double xa, double xb, double xtol, double rtol,
                  int max_iter = 100) {
  double xpre = xa;
  double xcur = xb;
  double fpre = f(xpre);
  double fcur = f(xcur);
  if (fpre * fcur > 0.0) {
    throw NumericalFailure("root finder: interval does not bracket a sign change");
  }
  if (fpre == 0.0) return xpre;
  if (fcur == 0.0) return xcur;
  double xblk = 0.0;
  double fblk = 0.0;
  double spre = 0.0;
  double scur = 0.0;
  for (int i = 0; i < max_iter; ++i) {
    if (fpre * fcur < 0.0) {
      xblk = xpre;
      fblk = fpre;
      spre = scur = xcur - xpre;
    }
    if (std::abs(fblk) < std::abs(fcur)) {
      xpre = xcur;
      xcur = xblk;
      xblk = xpre;
      fpre = fcur;
      fcur = fblk;
      fblk = fpre;
    }
    const double delta = 0.5 * (xtol + rtol * std::abs(xcur));
    const double sbis = 0.5 * (xblk - xcur);
    if (fcur == 0.0 || std::abs(sbis) < delta) return xcur;
    if (std::abs(spre) > delta && std::abs(fcur) < std::abs(fpre)) {
      double stry;
      if (xpre == xblk) {
        stry = -fcur * (xcur - xpre) / (fcur - fpre);  // secant
      } else {
        const double dpre = (fpre - fcur) / (xpre - xcur);
        const double dblk = (fblk - fcur) / (xblk - xcur);
        stry = -fcur * (fblk * dpre - fpre * dblk) / (dblk * dpre * (xpre - xblk));
      }
      if (2.0 * std::abs(stry) < std::min(std::abs(spre), 3.0 * std::abs(sbis) - delta)) {
        spre = scur;
        scur = stry;
      } else {
        spre = sbis;
        scur = sbis;
      }
    } else {
      spre = sbis;
      scur = sbis;
    }
    xpre = xcur;
    fpre = fcur;
    if (std::abs(scur) > delta) {
      xcur += scur;
    } else {
      xcur += sbis > 0.0 ? delta : -delta;
    }
    fcur = f(xcur);
  }
  return xcur;
}

Eigen::Vector3d angles_to_unit(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

double angular_distance(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return std::acos(std::clamp(a.dot(b), -1.0, 1.0));
}

struct PolishResult {
  double value = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  int iterations = 0;
};

// Deterministic Nelder-Mead on (theta, phi); the objective is smooth and
// 2pi-periodic, so the walk may leave the fundamental domain freely.
PolishResult nelder_mead(const std::function<double(double, double)>& objective,
                         double theta0, double phi0, double step_theta, double step_phi,
                         double tol, int max_iter) {
  using Vertex = std::pair<Eigen::Vector2d, double>;
  const auto eval = [&](const Eigen::Vector2d& x) { return objective(x(0), x(1)); };
  std::array<Vertex, 3> v;
  v[0].first = Eigen::Vector2d(theta0, phi0);
  v[1].first = Eigen::Vector2d(theta0 + step_theta, phi0);
  v[2].first = Eigen::Vector2d(theta0, phi0 + step_phi);
  for (auto& vert : v) vert.second = eval(vert.first);

  int iter = 0;
  for (; iter < max_iter; ++iter) {
    std::sort(v.begin(), v.end(),
              [](const Vertex& a, const Vertex& b) { return a.second < b.second; });
    const double diameter =
        std::max({(v[0].first - v[1].first).norm(), (v[0].first - v[2].first).norm(),
                  (v[1].first - v[2].first).norm()});
    if (diameter < tol) break;
    const Eigen::Vector2d centroid = 0.5 * (v[0].first + v[1].first);
    const Eigen::Vector2d reflected = centroid + (centroid - v[2].first);
    const double f_reflected = eval(reflected);
    if (f_reflected < v[0].second) {
      const Eigen::Vector2d expanded = centroid + 2.0 * (centroid - v[2].first);
      const double f_expanded = eval(expanded);
      v[2] = f_expanded < f_reflected ? Vertex{expanded, f_expanded}
                                      : Vertex{reflected, f_reflected};
    } else if (f_reflected < v[1].second) {
      v[2] = {reflected, f_reflected};
    } else {
      const bool outside = f_reflected < v[2].second;
      const Eigen::Vector2d contracted =
          outside ? Eigen::Vector2d(centroid + 0.5 * (centroid - v[2].first))
                  : Eigen::Vector2d(centroid - 0.5 * (centroid - v[2].first));
      const double f_contracted = eval(contracted);
      if (f_contracted < std::min(f_reflected, v[2].second)) {
        v[2] = {contracted, f_contracted};
      } else {  // shrink toward the best vertex
        for (int k = 1; k < 3; ++k) {
          v[k].first = v[0].first + 0.5 * (v[k].first - v[0].first);
          v[k].second = eval(v[k].first);
        }
      }
    }
  }
  std::sort(v.begin(), v.end(),
            [](const Vertex& a, const Vertex& b) { return a.second < b.second; });
  return {v[0].second, v[0].first(0), v[0].first(1), iter};
}

}  // namespace

SphereQuadratic reduce_to_sphere_quadratic(const MomentSummary& moments) {
  if (moments.s < k_intensity_floor) {
    throw ZeroIntensity("vacuum state: Q undefined (zero mean photon number)");
  }
  SphereQuadratic quad;
  quad.A = -moments.R - 4.0 * moments.u * moments.u.transpose();
  quad.b = 2.0 * moments.v - 8.0 * moments.s * moments.u;
  quad.c = moments.R.trace() - 4.0 * moments.s * moments.s;
  quad.scale = 1.0 / (8.0 * moments.s);
  return quad;
}

QResult minimize_sphere_quadratic(const SphereQuadratic& quadratic) {
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(quadratic.A);
  if (es.info() != Eigen::Success) {
    throw NumericalFailure("eigendecomposition of the sphere quadratic failed");
  }
  const Eigen::Vector3d w = es.eigenvalues();  // ascending
  const Eigen::Matrix3d v = es.eigenvectors();
  const Eigen::Vector3d beta = v.transpose() * (0.5 * quadratic.b);
  const double lambda_min = w(0);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double scale = 1.0 + w.cwiseAbs().maxCoeff() + beta.norm();
  const double ztol = 8.0 * eps * scale;
  std::array<bool, 3> active{};
  std::array<bool, 3> bottom{};
  for (int i = 0; i < 3; ++i) {
    active[i] = std::abs(beta(i)) > ztol;
    bottom[i] = std::abs(w(i) - lambda_min) <= 1e-12 * scale;
  }

  const auto secular = [&](double mu) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
      if (!active[i]) continue;
      const double y = beta(i) / (w(i) - mu);
      acc += y * y;
    }
    return acc;
  };

  const auto finish = [&](double mu, const Eigen::Vector3d& extra, bool hard,
                          double slack) {
    Eigen::Vector3d y = Eigen::Vector3d::Zero();
    for (int i = 0; i < 3; ++i) {
      if (active[i]) y(i) = beta(i) / (w(i) - mu);
    }
    Eigen::Vector3d q = v * (-y) + extra;
    const double n = q.norm();
    if (n > 0.0) q /= n;
    QResult res;
    res.q_min = quadratic.scale *
                (q.dot(quadratic.A * q) + quadratic.b.dot(q) + quadratic.c);
    res.q_bar = sphere_direction(q);
    res.alpha_bar = alpha_of_q(res.q_bar);
    res.method = MinimizeMethod::SecularExact;
    res.multiplier = mu;
    res.stationarity =
        ((quadratic.A - mu * Eigen::Matrix3d::Identity()) * q + 0.5 * quadratic.b).norm();
    res.hard_case = hard;
    res.degenerate = hard && slack > 1e-9;
    return res;
  };

  bool pole = false;
  double beta_pole = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (active[i] && bottom[i]) {
      pole = true;
      beta_pole = std::max(beta_pole, std::abs(beta(i)));
    }
  }
  double hi;
  if (pole) {
    // the secular function blows up at lambda_min; back off until it is >= 1
    hi = lambda_min - std::max(0.5 * beta_pole, 4.0 * eps * scale);
  } else {
    hi = lambda_min;
    if (secular(hi) < 1.0) {
      // hard case: mu = lambda_min, fill the norm slack along the bottom
      // eigenspace, chosen canonically (max q3, then q1, then q2)
      Eigen::Vector3d y = Eigen::Vector3d::Zero();
      for (int i = 0; i < 3; ++i) {
        if (active[i]) y(i) = beta(i) / (w(i) - lambda_min);
      }
      const double slack = std::sqrt(std::max(0.0, 1.0 - y.squaredNorm()));
      std::vector<int> bottom_cols;
      for (int i = 0; i < 3; ++i) {
        if (bottom[i]) bottom_cols.push_back(i);
      }
      Eigen::Vector3d fill = v.col(bottom_cols.front());
      for (int axis : {2, 0, 1}) {
        Eigen::VectorXd proj(bottom_cols.size());
        for (std::size_t k = 0; k < bottom_cols.size(); ++k) {
          proj(static_cast<Eigen::Index>(k)) = v(axis, bottom_cols[k]);
        }
        if (proj.norm() > 1e-12) {
          proj /= proj.norm();
          fill.setZero();
          for (std::size_t k = 0; k < bottom_cols.size(); ++k) {
            fill += v.col(bottom_cols[k]) * proj(static_cast<Eigen::Index>(k));
          }
          break;
        }
      }
      return finish(lambda_min, slack * fill, true, slack);
    }
  }
  double lo = std::min(hi - 1.0, lambda_min - 0.5 * quadratic.b.norm() - 1.0);
  while (secular(lo) >= 1.0) lo -= 2.0 * (hi - lo);
  const double mu =
      brent_root([&](double m) { return secular(m) - 1.0; }, lo, hi, 1e-15, 8.9e-16);
  return finish(mu, Eigen::Vector3d::Zero(), false, 0.0);
}

QResult minimize_grid(const std::function<double(double, double)>& objective,
                      const GridConfig& config) {
  if (config.n_theta < 2 || config.n_phi < 1) {
    throw ValidationError("grid scan needs at least 2 theta rows and 1 phi column");
  }
  const int n_theta = config.n_theta;
  const int n_phi = config.n_phi;
  const double step_theta = M_PI / (n_theta - 1);
  const double step_phi = 2.0 * M_PI / n_phi;

  std::vector<double> values(static_cast<std::size_t>(n_theta) * n_phi);
  for (int it = 0; it < n_theta; ++it) {
    for (int ip = 0; ip < n_phi; ++ip) {
      values[static_cast<std::size_t>(it) * n_phi + ip] =
          objective(it * step_theta, ip * step_phi);
    }
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // scan-order index as tie-break so equal-value cells rank deterministically
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] != values[b] ? values[a] < values[b] : a < b;
  });

  // up to five well separated polish starts, best cells first
  const double separation = 6.0 * std::max(step_theta, step_phi);
  std::vector<std::pair<double, double>> starts;
  std::vector<Eigen::Vector3d> start_dirs;
  for (std::size_t idx : order) {
    const double th = static_cast<double>(idx / n_phi) * step_theta;
    const double ph = static_cast<double>(idx % n_phi) * step_phi;
    const Eigen::Vector3d dir = angles_to_unit(th, ph);
    bool separated = true;
    for (const Eigen::Vector3d& seen : start_dirs) {
      if (angular_distance(dir, seen) < separation) {
        separated = false;
        break;
      }
    }
    if (!separated) continue;
    starts.emplace_back(th, ph);
    start_dirs.push_back(dir);
    if (starts.size() == 5) break;
  }

  std::vector<PolishResult> polished;
  int total_iterations = 0;
  for (const auto& [th, ph] : starts) {
    PolishResult p = nelder_mead(objective, th, ph, step_theta, step_phi,
                                 config.refine_tol, config.max_iter);
    total_iterations += p.iterations;
    polished.push_back(p);
  }

  // canonical angles for deterministic tie-breaking
  struct Candidate {
    double value;
    SphereDirection dir;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(polished.size());
  for (const PolishResult& p : polished) {
    candidates.push_back({p.value, sphere_direction(p.theta, p.phi)});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.dir.theta != b.dir.theta) return a.dir.theta < b.dir.theta;
    return a.dir.phi < b.dir.phi;
  });
  Candidate best = candidates.front();
  bool degenerate = false;
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    if (candidates[k].value > best.value + 1e-9) break;
    if (angular_distance(candidates[k].dir.q, best.dir.q) > 1e-6) {
      // an equal-value minimizer at a genuinely different direction; keep the
      // canonical (smallest-angle) representative
      degenerate = true;
      if (candidates[k].dir.theta < best.dir.theta ||
          (candidates[k].dir.theta == best.dir.theta &&
           candidates[k].dir.phi < best.dir.phi)) {
        best = candidates[k];
      }
    }
  }

  QResult res;
  res.q_min = best.value;
  res.q_bar = best.dir;
  res.alpha_bar = alpha_of_q(res.q_bar);
  res.method = MinimizeMethod::GridRefine;
  res.degenerate = degenerate;
  res.grid_theta = n_theta;
  res.grid_phi = n_phi;
  res.refine_iterations = total_iterations;
  return res;
}

QResult invariant_mandel_q(const TwoModeState& state, const InvariantOptions& options) {
  const MomentSummary moments =
      options.cutoff ? extract_moments(state, *options.cutoff) : extract_moments(state);
  const SphereQuadratic quad = reduce_to_sphere_quadratic(moments);
  QResult res = minimize_sphere_quadratic(quad);

  // the reported minimum may never exceed Q along any probe direction
  for (int dx = -1; dx <= 1; ++dx) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dz = -1; dz <= 1; ++dz) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        const SphereDirection dir = sphere_direction(Eigen::Vector3d(dx, dy, dz));
        const double probe = mandel_q_at(moments, dir);
        if (probe < res.q_min - 1e-9) {
          std::ostringstream os;
          os << "reported minimum " << res.q_min << " exceeds Q = " << probe
             << " at probe direction (" << dx << ", " << dy << ", " << dz << ")";
          throw NumericalFailure(os.str());
        }
      }
    }
  }

  if (options.cross_check_closed_form && has_closed_form(state)) {
    const QResult grid = minimize_grid(
        [&](double theta, double phi) {
          return closed_form_q(state, sphere_direction(theta, phi));
        },
        options.cross_check_grid);
    if (std::abs(grid.q_min - res.q_min) > options.cross_check_tol) {
      std::ostringstream os;
      os << "closed-form grid minimum " << grid.q_min
         << " disagrees with the moment-reduction minimum " << res.q_min << " by "
         << std::abs(grid.q_min - res.q_min) << " (tolerance " << options.cross_check_tol
         << ")";
      throw ClosedFormMismatch(os.str());
    }
  }
  return res;
}

}  // namespace mandelq
