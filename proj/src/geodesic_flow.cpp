#include "finslergeo/geodesic_flow.hpp"

#include "finslergeo/errors.hpp"
#include "finslergeo/sampling.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace finslergeo {

namespace {

constexpr int kMaxChartDim = 16;

/// Hessian of y -> F(x, y)^2 / 2 with J = left trivialization at x. The
/// seeds are pushed through J, so the norm sees J(y + s e_i + r e_j).
Mat chart_g_unchecked(const ChartMetric& cm, const Mat& J, const Vec& y) {
  const int n = cm.dim();
  const Vec jy = J * y;
  std::array<D2, kMaxChartDim> seeded;
  Mat g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int k = 0; k < n; ++k) seeded[k] = D2(D1(jy[k], J(k, i)), D1(J(k, j), 0.0));
      const double h = 0.5 * cm.norm().squared(std::span<const D2>(seeded.data(), n)).d.d;
      g(i, j) = h;
      g(j, i) = h;
    }
  }
  return g;
}

Mat chart_g_at(const ChartMetric& cm, const Vec& x, const Vec& y) {
  return chart_g_unchecked(cm, cm.model().left_trivialization(x), y);
}

void require_nonzero(const Vec& y, const char* what) {
  if (y.size() == 0 || y.cwiseAbs().maxCoeff() == 0.0) throw ZeroVector(std::string(what) + ": y must be nonzero");
}

}  // namespace

Mat chart_fundamental_tensor(const ChartMetric& cm, const Vec& x, const Vec& y) {
  require_dim(x, cm.dim(), "chart_fundamental_tensor x");
  require_dim(y, cm.dim(), "chart_fundamental_tensor y");
  require_nonzero(y, "chart_fundamental_tensor");
  if (cm.dim() > kMaxChartDim) throw DimensionMismatch("chart dimension exceeds 16");
  Mat g = chart_g_at(cm, x, y);
  if (!cholesky_check(g).positive_definite) throw SingularTensor("chart fundamental tensor is not positive definite");
  return g;
}

SprayEvaluation spray_coefficients(const ChartMetric& cm, const Vec& x, const Vec& y, const SprayOptions& opts) {
  const int n = cm.dim();
  require_dim(x, n, "spray x");
  require_dim(y, n, "spray y");
  require_nonzero(y, "spray_coefficients");
  if (n > kMaxChartDim) throw DimensionMismatch("chart dimension exceeds 16");
  SprayEvaluation out;
  out.x = x;
  out.y = y;
  out.g_matrix = chart_g_at(cm, x, y);
  Eigen::LLT<Mat> llt(out.g_matrix);
  if (llt.info() != Eigen::Success || !cholesky_check(out.g_matrix).positive_definite) {
    throw SingularTensor("spray: fundamental tensor is not positive definite");
  }
  out.g_inverse = llt.solve(Mat::Identity(n, n));

  const double h = opts.x_step;
  // a_l = y^k (dg_{sl}/dx^k) y^s ; b_l = (dg_{sk}/dx^l) y^s y^k
  Vec a = Vec::Zero(n);
  Vec b(n);
  for (int k = 0; k < n; ++k) {
    Vec e = Vec::Zero(n);
    e[k] = 1.0;
    const Mat d_h = (chart_g_at(cm, x + h * e, y) - chart_g_at(cm, x - h * e, y)) / (2.0 * h);
    const Mat d_h2 = (chart_g_at(cm, x + 0.5 * h * e, y) - chart_g_at(cm, x - 0.5 * h * e, y)) / h;
    const Mat dg = (4.0 * d_h2 - d_h) / 3.0;
    const Vec dgy = dg * y;
    a += y[k] * dgy;
    b[k] = y.dot(dgy);
  }
  out.G = 0.25 * out.g_inverse * (2.0 * a - b);
  return out;
}

double GeodesicPath::max_relative_drift() const {
  if (samples.empty()) return 0.0;
  const double f0 = samples.front().F;
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, std::abs(s.F - f0) / f0);
  return m;
}

GeodesicPath integrate_geodesic(const ChartMetric& cm, const Vec& x0, const Vec& y0, double T, double step,
                                const SprayOptions& opts) {
  require_dim(x0, cm.dim(), "integrate_geodesic x0");
  require_dim(y0, cm.dim(), "integrate_geodesic y0");
  require_nonzero(y0, "integrate_geodesic");
  if (!(T > 0.0)) throw ValidationError("integrate_geodesic: T must be positive (forward integration only)");
  if (!(step > 0.0)) throw ValidationError("integrate_geodesic: step must be positive");
  const GroupModel& model = cm.model();
  model.check_domain(x0);

  auto accel = [&](const Vec& x, const Vec& y) -> Vec { return -2.0 * spray_coefficients(cm, x, y, opts).G; };

  GeodesicPath path;
  path.step = step;
  const long n_steps = static_cast<long>(std::ceil(T / step - 1e-9));
  path.samples.reserve(static_cast<size_t>(n_steps) + 1);
  Vec x = x0;
  Vec y = y0;
  double f = cm.F(x, y);
  path.samples.push_back({0.0, x, y, f});
  double t = 0.0;
  for (long k = 1; k <= n_steps; ++k) {
    const double t_next = k == n_steps ? T : static_cast<double>(k) * step;
    const double h = t_next - t;
    const Vec k1x = y;
    const Vec k1y = accel(x, y);
    const Vec k2x = y + 0.5 * h * k1y;
    const Vec k2y = accel(x + 0.5 * h * k1x, k2x);
    const Vec k3x = y + 0.5 * h * k2y;
    const Vec k3y = accel(x + 0.5 * h * k2x, k3x);
    const Vec k4x = y + h * k3y;
    const Vec k4y = accel(x + h * k3x, k4x);
    x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    y += (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    model.check_domain(x);
    const double f_new = cm.F(x, y);
    if (!(std::abs(f_new - f) <= 1e-3 * f)) {
      std::ostringstream os;
      os << "integrate_geodesic: F changed from " << f << " to " << f_new << " in one step at t=" << t_next;
      throw StepRejected(os.str());
    }
    f = f_new;
    t = t_next;
    path.samples.push_back({t, x, y, f});
  }
  return path;
}

HomogeneityReport is_homogeneous_geodesic(std::shared_ptr<const GroupModel> model, const MinkowskiNorm& norm,
                                          const Vec& x, double T, double step, double tol, double residual_tol) {
  require_dim(x, model->dim(), "is_homogeneous_geodesic X");
  if (x.cwiseAbs().maxCoeff() == 0.0) throw DegenerateVector("is_homogeneous_geodesic: X must be nonzero");
  const ChartMetric cm(model, norm);
  HomogeneityReport rep;
  rep.x = x;
  rep.tol = tol;
  const GeodesicPath path = integrate_geodesic(cm, model->identity(), x, T, step);
  std::vector<double> ts;
  ts.reserve(path.samples.size());
  for (const auto& s : path.samples) ts.push_back(s.t);
  const auto orbit = orbit_curve(*model, x, model->identity(), ts);
  for (size_t i = 0; i < ts.size(); ++i) {
    rep.sup_distance = std::max(rep.sup_distance, (path.samples[i].x - orbit[i].point).norm());
  }
  rep.passed = rep.sup_distance <= tol;
  rep.max_F_drift = path.max_relative_drift();
  rep.residual_norm = geodesic_residual(model->decomposition(), norm, x).norm();
  rep.consistent = rep.passed == (rep.residual_norm <= residual_tol);
  return rep;
}

BerwaldReport berwald_test(const ChartMetric& cm, const Vec& x, int samples, std::uint64_t seed, double tol) {
  const int n = cm.dim();
  require_dim(x, n, "berwald_test x");
  const double h = 0.05;
  BerwaldReport rep;
  rep.tol = tol;
  rep.samples = samples;
  std::mt19937_64 rng(seed);
  auto G = [&](const Vec& y) { return spray_coefficients(cm, x, y).G; };
  // hess[i] is the y-Hessian of G^i.
  auto hessians = [&](const Vec& y) {
    std::vector<Mat> hess(n, Mat::Zero(n, n));
    const Vec g0 = G(y);
    rep.max_G = std::max(rep.max_G, g0.cwiseAbs().maxCoeff());
    for (int a = 0; a < n; ++a) {
      Vec ea = Vec::Zero(n);
      ea[a] = h;
      const Vec d2 = (G(y + ea) - 2.0 * g0 + G(y - ea)) / (h * h);
      for (int i = 0; i < n; ++i) hess[i](a, a) = d2[i];
      for (int b = a + 1; b < n; ++b) {
        Vec eb = Vec::Zero(n);
        eb[b] = h;
        const Vec mixed = (G(y + ea + eb) - G(y + ea - eb) - G(y - ea + eb) + G(y - ea - eb)) / (4.0 * h * h);
        for (int i = 0; i < n; ++i) {
          hess[i](a, b) = mixed[i];
          hess[i](b, a) = mixed[i];
        }
      }
    }
    return hess;
  };
  std::vector<Mat> ref;
  double scale = 1.0;
  for (int s = 0; s < samples; ++s) {
    const Vec y = random_unit_vector(n, rng);
    const std::vector<Mat> hs = hessians(y);
    if (s == 0) {
      ref = hs;
      for (const Mat& m : ref) scale = std::max(scale, m.cwiseAbs().maxCoeff());
      continue;
    }
    for (int i = 0; i < n; ++i) {
      rep.max_hessian_spread = std::max(rep.max_hessian_spread, (hs[i] - ref[i]).cwiseAbs().maxCoeff());
    }
  }
  rep.passed = rep.max_hessian_spread <= tol * scale;
  return rep;
}

}  // namespace finslergeo
