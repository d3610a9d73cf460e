#pragma once

// Geodesics of a chart metric through its spray:
//   x'' + 2 G(x, x') = 0,
//   G^j = 1/4 g^{jl} (2 dg_{sl}/dx^k - dg_{sk}/dx^l) y^s y^k.
// y-derivatives of F^2 are exact (duals); x-derivatives of g_ij are central
// differences with one Richardson step.

#include "finslergeo/geodesic_vectors.hpp"
#include "finslergeo/group_model.hpp"

#include <string>
#include <vector>

namespace finslergeo {

/// g_ij(x, y) = 1/2 d^2 F^2 / dy^i dy^j. Throws ZeroVector, SingularTensor.
Mat chart_fundamental_tensor(const ChartMetric& cm, const Vec& x, const Vec& y);

struct SprayOptions {
  double x_step = 1e-5;
};

struct SprayEvaluation {
  Vec x;
  Vec y;
  Vec G;
  Mat g_matrix;
  Mat g_inverse;
};

SprayEvaluation spray_coefficients(const ChartMetric& cm, const Vec& x, const Vec& y, const SprayOptions& opts = {});

struct PathSample {
  double t = 0.0;
  Vec x;
  Vec y;
  double F = 0.0;
};

struct GeodesicPath {
  std::vector<PathSample> samples;
  double step = 0.0;
  std::string method = "rk4";

  /// max_t |F(t) - F(0)| / F(0).
  double max_relative_drift() const;
};

/// Classical RK4 on (x, y) with y' = -2G(x, y), forward only, one sample per
/// step (the last step is shortened to land on T). Throws ZeroVector,
/// ValidationError for bad T/step, ChartDomain, and StepRejected when F moves
/// by more than 1e-3 relative in a single step.
GeodesicPath integrate_geodesic(const ChartMetric& cm, const Vec& x0, const Vec& y0, double T, double step,
                                const SprayOptions& opts = {});

struct HomogeneityReport {
  Vec x;
  double sup_distance = 0.0;
  double tol = 0.0;
  bool passed = false;
  double residual_norm = 0.0;
  /// passed == (residual_norm <= residual_tol).
  bool consistent = false;
  double max_F_drift = 0.0;
};

/// Integrates from (e, X) and compares with the orbit exp(tX) on [0, T].
HomogeneityReport is_homogeneous_geodesic(std::shared_ptr<const GroupModel> model, const MinkowskiNorm& norm,
                                          const Vec& x, double T = 2.0, double step = 1e-3, double tol = 1e-5,
                                          double residual_tol = 1e-9);

struct BerwaldReport {
  bool passed = false;
  /// max over sampled y, i, and entries of |Hess_y G^i(y) - Hess_y G^i(y_0)|.
  double max_hessian_spread = 0.0;
  double tol = 0.0;
  int samples = 0;
  double max_G = 0.0;
};

/// Estimates Hess_y G^i at `samples` points of the unit sphere (central
/// differences, step 0.05) and checks they agree, i.e. G is quadratic in y.
BerwaldReport berwald_test(const ChartMetric& cm, const Vec& x, int samples, std::uint64_t seed = 0,
                           double tol = 1e-5);

}  // namespace finslergeo
