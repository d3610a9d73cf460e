#include "finslergeo/s_curvature.hpp"

#include "finslergeo/errors.hpp"
#include "finslergeo/sphere_quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace finslergeo {

namespace {

double indicatrix_volume(const MinkowskiNorm& norm, const Mat& J, const SphereRule& rule) {
  const int n = rule.dim;
  double sum = 0.0;
  Vec ty(n);
  for (size_t k = 0; k < rule.nodes.size(); ++k) {
    ty.noalias() = J * rule.nodes[k];
    const double f = norm(ty);
    if (!(f > 0.0) || !std::isfinite(f)) {
      throw QuadratureDivergence("busemann_sigma: F is not positive on the unit sphere");
    }
    sum += rule.weights[k] * std::pow(f, -n);
  }
  return sum / n;
}

}  // namespace

VolumeFactor busemann_sigma(const ChartMetric& cm, const Vec& x, int min_nodes) {
  const int n = cm.dim();
  require_dim(x, n, "busemann_sigma x");
  if (n < 2 || n > 4) {
    throw DimensionMismatch("busemann_sigma supports dimensions 2, 3 and 4, got " + std::to_string(n));
  }
  const Mat J = cm.model().left_trivialization(x);
  const int r_fine = resolution_for_nodes(n, min_nodes);
  const int r_mid = std::max(1, (3 * r_fine) / 4);
  const int r_coarse = std::max(1, r_fine / 2);

  const auto fine = cached_sphere_rule(n, r_fine);
  const double v_fine = indicatrix_volume(cm.norm(), J, *fine);
  const double v_mid = indicatrix_volume(cm.norm(), J, *cached_sphere_rule(n, r_mid));
  const double v_coarse = indicatrix_volume(cm.norm(), J, *cached_sphere_rule(n, r_coarse));

  const double e_fine = std::abs(v_fine - v_mid);
  const double e_coarse = std::abs(v_mid - v_coarse);
  const double floor = 1e-10 * v_fine;
  if (e_fine > floor && e_fine > e_coarse) {
    std::ostringstream os;
    os << "busemann_sigma: refinement does not contract (" << e_coarse << " -> " << e_fine << ")";
    throw QuadratureDivergence(os.str());
  }

  VolumeFactor out;
  out.x = x;
  out.sigma = unit_ball_volume(n) / v_fine;
  out.quadrature_nodes = static_cast<int>(fine->nodes.size());
  out.estimated_error = out.sigma * std::max(e_fine, 1e-15 * v_fine) / v_fine;
  return out;
}

DistortionSample distortion(const ChartMetric& cm, const Vec& x, const Vec& y, int min_nodes) {
  require_dim(y, cm.dim(), "distortion y");
  if (y.cwiseAbs().maxCoeff() == 0.0) throw ZeroVector("distortion: y must be nonzero");
  const Mat g = chart_fundamental_tensor(cm, x, y);
  const VolumeFactor vf = busemann_sigma(cm, x, min_nodes);
  DistortionSample out;
  out.x = x;
  out.y = y;
  out.tau = 0.5 * std::log(g.determinant()) - std::log(vf.sigma);
  out.estimated_error = vf.estimated_error / vf.sigma;
  return out;
}

double s_curvature(const ChartMetric& cm, const Vec& x, const Vec& y, double dt, int min_nodes) {
  if (!(dt > 0.0)) throw ValidationError("s_curvature: dt must be positive");
  const GeodesicPath path = integrate_geodesic(cm, x, y, 2.0 * dt, 0.25 * dt);
  const auto& s = path.samples;
  const double tau0 = distortion(cm, s.front().x, s.front().y, min_nodes).tau;
  const double tau1 = distortion(cm, s[4].x, s[4].y, min_nodes).tau;
  const double tau2 = distortion(cm, s.back().x, s.back().y, min_nodes).tau;
  return (-3.0 * tau0 + 4.0 * tau1 - tau2) / (2.0 * dt);
}

double SCurvatureTrace::max_tau_deviation() const {
  double m = 0.0;
  for (double v : tau) m = std::max(m, std::abs(v - tau.front()));
  return m;
}

double SCurvatureTrace::max_abs_S() const {
  double m = 0.0;
  for (double v : S) m = std::max(m, std::abs(v));
  return m;
}

SCurvatureTrace s_along_path(const ChartMetric& cm, const GeodesicPath& path, int stride, int min_nodes) {
  if (stride < 1) throw ValidationError("s_along_path: stride must be positive");
  if (path.samples.empty()) throw ValidationError("s_along_path: empty path");
  SCurvatureTrace out;
  const size_t last = path.samples.size() - 1;
  for (size_t i = 0; i <= last; i += stride) {
    const auto& s = path.samples[i];
    const DistortionSample d = distortion(cm, s.x, s.y, min_nodes);
    out.t.push_back(s.t);
    out.tau.push_back(d.tau);
    out.error_bound.push_back(d.estimated_error);
    if (i != last && i + stride > last) i = last - stride;
  }
  const size_t m = out.t.size();
  out.S.assign(m, 0.0);
  if (m < 3) {
    if (m == 2) out.S[0] = out.S[1] = (out.tau[1] - out.tau[0]) / (out.t[1] - out.t[0]);
    return out;
  }
  // Second-order three-point formulas on a possibly non-uniform grid.
  auto deriv = [&](size_t a, size_t b, size_t c, size_t at) {
    const double ta = out.t[a], tb = out.t[b], tc = out.t[c], t = out.t[at];
    const double la = ((t - tb) + (t - tc)) / ((ta - tb) * (ta - tc));
    const double lb = ((t - ta) + (t - tc)) / ((tb - ta) * (tb - tc));
    const double lc = ((t - ta) + (t - tb)) / ((tc - ta) * (tc - tb));
    return la * out.tau[a] + lb * out.tau[b] + lc * out.tau[c];
  };
  out.S[0] = deriv(0, 1, 2, 0);
  for (size_t i = 1; i + 1 < m; ++i) out.S[i] = deriv(i - 1, i, i + 1, i);
  out.S[m - 1] = deriv(m - 3, m - 2, m - 1, m - 1);
  return out;
}

}  // namespace finslergeo
