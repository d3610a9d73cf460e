#include "finslergeo/errors.hpp"
#include "finslergeo/geodesic_flow.hpp"
#include "finslergeo/sampling.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace finslergeo;
using oracle::unit;

namespace {

Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

Vec random_point(std::mt19937_64& rng, double r = 0.8) {
  std::uniform_real_distribution<double> ud(-r, r);
  return vec3(ud(rng), ud(rng), ud(rng));
}

double sup_distance_to_orbit(const GroupModel& model, const GeodesicPath& path, const Vec& X, const Vec& p) {
  std::vector<double> ts;
  for (const auto& s : path.samples) ts.push_back(s.t);
  const auto orbit = orbit_curve(model, X, p, ts);
  double sup = 0.0;
  for (size_t i = 0; i < ts.size(); ++i) sup = std::max(sup, (orbit[i].point - path.samples[i].x).norm());
  return sup;
}

}  // namespace

TEST(ChartTensor, IdentityMatchesNormTensor) {
  std::mt19937_64 rng(1);
  const Mat a = oracle::random_spd(3, rng);
  const auto norm = make_randers(a, oracle::covector_with_norm(a, 0.5, rng));
  for (const auto& name : {"heisenberg3", "su2"}) {
    const ChartMetric cm(make_group_model(name), norm);
    for (int k = 0; k < 10; ++k) {
      const Vec y = random_point(rng);
      const Mat g = chart_fundamental_tensor(cm, Vec::Zero(3), y);
      EXPECT_LT((g - fundamental_tensor(norm, y).matrix).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(ChartTensor, HeisenbergPullbackMatchesGroupLaw) {
  std::mt19937_64 rng(2);
  const Mat a = oracle::random_spd(3, rng);
  const ChartMetric cm(make_group_model("heisenberg3"), MinkowskiNorm::euclidean(a));
  for (int k = 0; k < 20; ++k) {
    const Vec x = 3.0 * random_point(rng);
    const Mat g = chart_fundamental_tensor(cm, x, random_point(rng));
    EXPECT_LT((g - oracle::h3_pullback(a, x)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Spray, FlatMinkowskiSpaceHasNoSpray) {
  std::mt19937_64 rng(3);
  const Mat a = oracle::random_spd(3, rng);
  const ChartMetric cm(make_group_model("abelian3"), make_randers(a, oracle::covector_with_norm(a, 0.6, rng)));
  for (int k = 0; k < 10; ++k) {
    EXPECT_LT(spray_coefficients(cm, random_point(rng), random_point(rng)).G.norm(), 1e-12);
  }
  const Vec y0 = vec3(0.3, -0.7, 0.2);
  const auto path = integrate_geodesic(cm, Vec::Zero(3), y0, 2.0, 1e-2);
  for (const auto& s : path.samples) EXPECT_LT((s.x - s.t * y0).norm(), 1e-12);
}

TEST(Spray, TwoHomogeneous) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ud(0.2, 3.0);
  const Mat a = oracle::random_spd(3, rng);
  const auto randers = make_randers(a, oracle::covector_with_norm(a, 0.7, rng));
  for (const auto& name : {"heisenberg3", "su2"}) {
    const ChartMetric cm(make_group_model(name), randers);
    for (int k = 0; k < 200; ++k) {
      const Vec x = random_point(rng), y = random_point(rng);
      const double lam = ud(rng);
      const Vec G1 = spray_coefficients(cm, x, y).G;
      const Vec G2 = spray_coefficients(cm, x, lam * y).G;
      ASSERT_LT((G2 - lam * lam * G1).norm(), 1e-8 * std::max(1.0, lam * lam * G1.norm())) << name;
    }
  }
}

TEST(Integrate, FirstIntegral) {
  std::mt19937_64 rng(5);
  for (const auto& name : {"heisenberg3", "su2"}) {
    for (int k = 0; k < 4; ++k) {
      const Mat a = oracle::random_spd(3, rng);
      const ChartMetric cm(make_group_model(name), make_randers(a, oracle::covector_with_norm(a, 0.5, rng)));
      const auto path = integrate_geodesic(cm, 0.5 * random_point(rng), random_point(rng), 2.0, 1e-3);
      EXPECT_EQ(path.samples.size(), 2001u);
      EXPECT_DOUBLE_EQ(path.samples.back().t, 2.0);
      EXPECT_LE(path.max_relative_drift(), 1e-6) << name;
    }
  }
}

TEST(Integrate, RiemannianMatchesChristoffelIntegrator) {
  std::mt19937_64 rng(6);
  const Mat a = oracle::random_spd(3, rng);
  const ChartMetric cm(make_group_model("heisenberg3"), MinkowskiNorm::euclidean(a));
  const Vec x0 = vec3(0.1, -0.2, 0.3), y0 = vec3(0.8, 0.5, -0.4);
  const auto path = integrate_geodesic(cm, x0, y0, 1.0, 1e-3);
  const auto ref = oracle::riemannian_geodesic([&](const Vec& x) { return oracle::h3_pullback(a, x); }, x0, y0, 1.0,
                                               1e-3);
  ASSERT_EQ(ref.size(), path.samples.size());
  double sup = 0.0;
  for (size_t i = 0; i < ref.size(); ++i) sup = std::max(sup, (ref[i] - path.samples[i].x).norm());
  EXPECT_LE(sup, 1e-7);
}

TEST(Integrate, VerticalHeisenbergGeodesicIsOrbit) {
  const auto h3 = make_group_model("heisenberg3");
  const ChartMetric cm(h3, MinkowskiNorm::euclidean(Mat::Identity(3, 3)));
  const auto path = integrate_geodesic(cm, Vec::Zero(3), unit(3, 2), 2.0, 1e-3);
  EXPECT_LT(sup_distance_to_orbit(*h3, path, unit(3, 2), Vec::Zero(3)), 1e-10);
}

TEST(Integrate, Errors) {
  const ChartMetric h3(make_group_model("heisenberg3"), make_randers(Mat::Identity(3, 3), vec3(0, 0, 0.5)));
  EXPECT_THROW(integrate_geodesic(h3, Vec::Zero(3), Vec::Zero(3), 1.0, 1e-3), ZeroVector);
  EXPECT_THROW(integrate_geodesic(h3, Vec::Zero(3), unit(3, 0), 0.0, 1e-3), ValidationError);
  EXPECT_THROW(integrate_geodesic(h3, Vec::Zero(3), unit(3, 0), 1.0, -1e-3), ValidationError);
  EXPECT_THROW(integrate_geodesic(h3, Vec::Zero(3), vec3(3, 3, 3), 3.0, 0.5), StepRejected);
  const ChartMetric su2(make_group_model("su2"), MinkowskiNorm::euclidean(Mat::Identity(3, 3)));
  EXPECT_THROW(integrate_geodesic(su2, Vec::Zero(3), unit(3, 0), 7.0, 1e-2), ChartDomain);
  // Not strongly convex on the axes.
  const auto l4 = MinkowskiNorm::custom(3, [](std::span<const D3> y) {
    return sqrt(sqrt(y[0] * y[0] * y[0] * y[0] + y[1] * y[1] * y[1] * y[1] + y[2] * y[2] * y[2] * y[2]));
  });
  const ChartMetric bad(make_group_model("abelian3"), l4);
  EXPECT_THROW(chart_fundamental_tensor(bad, Vec::Zero(3), unit(3, 0)), SingularTensor);
}

TEST(Homogeneous, BiInvariantSU2EveryDirection) {
  const auto su2 = make_group_model("su2");
  const auto norm = MinkowskiNorm::euclidean(Mat::Identity(3, 3));
  std::mt19937_64 rng(7);
  for (int k = 0; k < 5; ++k) {
    const Vec X = random_unit_vector(3, rng);
    const auto rep = is_homogeneous_geodesic(su2, norm, X);
    EXPECT_TRUE(rep.passed) << rep.sup_distance;
    EXPECT_TRUE(rep.consistent);
    EXPECT_LE(rep.sup_distance, 1e-5);
  }
}

TEST(Homogeneous, HeisenbergAgreesWithResidual) {
  const auto h3 = make_group_model("heisenberg3");
  const auto norm = MinkowskiNorm::euclidean(Mat::Identity(3, 3));
  const auto good = is_homogeneous_geodesic(h3, norm, unit(3, 0));
  EXPECT_TRUE(good.passed);
  EXPECT_TRUE(good.consistent);
  const auto bad = is_homogeneous_geodesic(h3, norm, (unit(3, 0) + unit(3, 2)).normalized());
  EXPECT_FALSE(bad.passed);
  EXPECT_TRUE(bad.consistent);
  EXPECT_GT(bad.sup_distance, 1e-2);
}

TEST(Homogeneous, BidirectionalOnHeisenberg) {
  // Both directions of the criterion: residual zero <=> orbit is a geodesic.
  const auto h3 = make_group_model("heisenberg3");
  const auto norm = MinkowskiNorm::euclidean(Mat::Identity(3, 3));
  const ReductiveDecomposition dec(algebras::heisenberg3());
  SolverOptions opts;
  opts.samples = 64;
  const auto set = find_geodesic_vectors(dec, norm, opts);
  ASSERT_FALSE(set.representatives.empty());
  for (size_t i = 0; i < set.representatives.size(); i += 4) {
    const auto rep = is_homogeneous_geodesic(h3, norm, set.representatives[i]);
    EXPECT_TRUE(rep.passed) << rep.sup_distance;
  }
  std::mt19937_64 rng(8);
  int failing = 0;
  while (failing < 20) {
    const Vec X = random_unit_vector(3, rng);
    if (geodesic_residual(dec, norm, X).norm() <= 1e-3) continue;
    const auto rep = is_homogeneous_geodesic(h3, norm, X);
    EXPECT_FALSE(rep.passed) << rep.sup_distance;
    EXPECT_TRUE(rep.consistent);
    ++failing;
  }
}

TEST(Homogeneous, SU2RandomInitialVectorsFollowOrbits) {
  // Every geodesic from the identity of a bi-invariant metric is exp(t y0).
  const auto su2 = make_group_model("su2");
  const ChartMetric cm(su2, MinkowskiNorm::euclidean(Mat::Identity(3, 3)));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ud(0.3, 1.5);
  std::vector<Vec> y0s;
  for (int k = 0; k < 50; ++k) y0s.push_back(ud(rng) * random_unit_vector(3, rng));
  std::vector<double> sup(y0s.size());
  parallel_for(static_cast<int>(y0s.size()), [&](int k) {
    const auto path = integrate_geodesic(cm, Vec::Zero(3), y0s[k], 2.0, 1e-3);
    sup[k] = sup_distance_to_orbit(*su2, path, y0s[k], Vec::Zero(3));
  });
  for (double s : sup) EXPECT_LE(s, 1e-5);
}

TEST(Berwald, RiemannianAndFlatPass) {
  std::mt19937_64 rng(10);
  const Mat a = oracle::random_spd(3, rng);
  const ChartMetric h3(make_group_model("heisenberg3"), MinkowskiNorm::euclidean(a));
  const auto r1 = berwald_test(h3, vec3(0.2, 0.1, -0.3), 6, 1);
  EXPECT_TRUE(r1.passed) << r1.max_hessian_spread;
  const ChartMetric flat(make_group_model("abelian3"), make_randers(a, oracle::covector_with_norm(a, 0.6, rng)));
  const auto r2 = berwald_test(flat, Vec::Zero(3), 6, 1);
  EXPECT_TRUE(r2.passed);
  EXPECT_LT(r2.max_G, 1e-12);
}

TEST(Berwald, RandersMatchesParallelOneForm) {
  // A Randers metric is Berwald exactly when b is parallel for alpha. The
  // covariant derivative of the left-invariant field b# is the oracle.
  struct Case {
    const char* model;
    Vec b;
  };
  const std::vector<Case> cases{{"heisenberg3", vec3(0, 0, 0.5)},
                                {"heisenberg3", vec3(0.5, 0, 0)},
                                {"su2", vec3(0.3, 0, 0)},
                                {"abelian3", vec3(0.2, -0.4, 0.1)}};
  const Vec x = vec3(0.1, 0.2, -0.1);
  for (const auto& c : cases) {
    const auto model = make_group_model(c.model);
    const Mat a = Mat::Identity(3, 3);
    auto metric = [&](const Vec& p) {
      const Mat J = model->left_trivialization(p);
      return Mat(J.transpose() * a * J);
    };
    auto field = [&](const Vec& p) { return Vec(model->left_trivialization(p).inverse() * c.b); };
    const double nabla = oracle::covariant_derivative(metric, field, x).cwiseAbs().maxCoeff();
    const bool parallel = nabla < 1e-6;
    const ChartMetric cm(model, make_randers(a, c.b));
    const auto rep = berwald_test(cm, x, 6, 2);
    EXPECT_EQ(rep.passed, parallel) << c.model << " nabla b = " << nabla << " spread " << rep.max_hessian_spread;
  }
}
