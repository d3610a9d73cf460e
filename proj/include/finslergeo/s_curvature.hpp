#pragma once

// Busemann volume factor, distortion and S-curvature for chart metrics.
//   sigma(x) = Vol(B^n) / Vol{y : F(x, y) < 1},
//   Vol{F < 1} = (1/n) * integral over S^{n-1} of F(x, theta)^{-n},
//   tau(x, y) = ln(sqrt(det g_y) / sigma(x)),
//   S(x, y) = d/dt tau(c(t), c'(t)) at t = 0 along the geodesic c.

#include "finslergeo/geodesic_flow.hpp"

#include <vector>

namespace finslergeo {

struct VolumeFactor {
  Vec x;
  double sigma = 0.0;
  int quadrature_nodes = 0;
  double estimated_error = 0.0;
};

/// Radial-formula quadrature with at least `min_nodes` sphere nodes, compared
/// against two coarser rules. Throws DimensionMismatch (n not in {2,3,4}) and
/// QuadratureDivergence when refinement does not contract.
VolumeFactor busemann_sigma(const ChartMetric& cm, const Vec& x, int min_nodes = 10000);

struct DistortionSample {
  Vec x;
  Vec y;
  double tau = 0.0;
  double estimated_error = 0.0;
};

DistortionSample distortion(const ChartMetric& cm, const Vec& x, const Vec& y, int min_nodes = 10000);

/// One-sided second-order difference (-3 tau_0 + 4 tau_1 - tau_2) / (2 dt) of
/// tau along the forward geodesic with initial data (x, y).
double s_curvature(const ChartMetric& cm, const Vec& x, const Vec& y, double dt = 1e-3, int min_nodes = 10000);

struct SCurvatureTrace {
  std::vector<double> t;
  std::vector<double> tau;
  /// Three-point finite differences of tau (one-sided at the ends).
  std::vector<double> S;
  std::vector<double> error_bound;

  double max_tau_deviation() const;
  double max_abs_S() const;
};

/// tau at every `stride`-th sample of the path, plus the S sequence.
SCurvatureTrace s_along_path(const ChartMetric& cm, const GeodesicPath& path, int stride = 1, int min_nodes = 10000);

}  // namespace finslergeo
