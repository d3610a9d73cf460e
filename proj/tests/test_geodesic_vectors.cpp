#include "finslergeo/errors.hpp"
#include "finslergeo/geodesic_vectors.hpp"
#include "finslergeo/sampling.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace finslergeo;
using oracle::unit;

namespace {

const ReductiveDecomposition& h3() {
  static const ReductiveDecomposition dec(algebras::heisenberg3());
  return dec;
}

const ReductiveDecomposition& su2() {
  static const ReductiveDecomposition dec(algebras::su2());
  return dec;
}

const MinkowskiNorm& euclid3() {
  static const MinkowskiNorm n = MinkowskiNorm::euclidean(Mat::Identity(3, 3));
  return n;
}

// Residual from central differences of F^2: r_j = (1/2) d/ds F^2(X + s [X, e_j]).
Vec fd_residual(const ReductiveDecomposition& dec, const MinkowskiNorm& norm, const Vec& x) {
  const int n = dec.dim();
  Vec r(n);
  const double h = 1e-6;
  for (int j = 0; j < n; ++j) {
    const Vec w = bracket(dec.algebra(), x, unit(n, j));
    const double fp = norm(x + h * w), fm = norm(x - h * w);
    r[j] = 0.5 * (fp * fp - fm * fm) / (2 * h);
  }
  return r;
}

}  // namespace

TEST(GeodesicResidual, HandExamples) {
  EXPECT_EQ(geodesic_residual(h3(), euclid3(), unit(3, 2)).residual, Vec::Zero(3));
  const Vec r = geodesic_residual(h3(), euclid3(), unit(3, 0) + unit(3, 2)).residual;
  EXPECT_NEAR(r[1], 1.0, 1e-15);
  EXPECT_NEAR(r[0], 0.0, 1e-15);
  EXPECT_NEAR(r[2], 0.0, 1e-15);
  EXPECT_THROW(geodesic_residual(h3(), euclid3(), Vec::Zero(3)), DegenerateVector);
}

TEST(GeodesicResidual, H3EuclideanClosedForm) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 100; ++k) {
    const Vec x = random_gaussian_vector(3, rng);
    Vec expect(3);
    expect << -x[1] * x[2], x[0] * x[2], 0.0;
    EXPECT_LT((geodesic_residual(h3(), euclid3(), x).residual - expect).norm(), 1e-14);
  }
}

TEST(GeodesicResidual, SU2BiInvariantVanishes) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 100; ++k) {
    EXPECT_LE(geodesic_residual(su2(), euclid3(), random_gaussian_vector(3, rng)).norm(), 1e-12);
  }
}

TEST(GeodesicResidual, MatchesFiniteDifferenceOracle) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    const Mat a = oracle::random_spd(3, rng);
    const auto norm = make_randers(a, oracle::covector_with_norm(a, 0.7, rng));
    const Vec x = random_gaussian_vector(3, rng);
    for (const auto* dec : {&h3(), &su2()}) {
      EXPECT_LT((geodesic_residual(*dec, norm, x).residual - fd_residual(*dec, norm, x)).norm(), 1e-7);
    }
  }
}

TEST(GeodesicResidual, ZeroSetScalingInvariance) {
  std::mt19937_64 rng(4);
  const auto norm = make_randers(Mat::Identity(3, 3), Vec(0.5 * unit(3, 0)));
  for (int k = 0; k < 50; ++k) {
    Vec x = random_gaussian_vector(3, rng);
    x[2] = 0.0;  // on the plane branch
    const double lambda = 0.1 + 0.2 * k;
    EXPECT_LE(geodesic_residual(h3(), norm, x).norm(), 1e-12);
    EXPECT_LE(geodesic_residual(h3(), norm, lambda * x).norm(), 1e-12);
    const Vec off = x + 0.3 * unit(3, 2);
    const bool zero1 = geodesic_residual(h3(), norm, off).norm() <= 1e-9;
    const bool zero2 = geodesic_residual(h3(), norm, lambda * off).norm() <= 1e-9;
    EXPECT_EQ(zero1, zero2);
  }
}

TEST(GeodesicResidual, AdInvarianceInBiInvariantCase) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const Vec x = random_gaussian_vector(3, rng);
    const Vec h = random_gaussian_vector(3, rng);
    const Vec moved = ad_exp(su2().algebra(), h, 0.7) * x;
    EXPECT_LE(geodesic_residual(su2(), euclid3(), moved).norm(), 1e-12);
  }
}

TEST(FindGeodesicVectors, H3EuclideanBranches) {
  SolverOptions opts;
  opts.samples = 512;
  const auto set = find_geodesic_vectors(h3(), euclid3(), opts);
  ASSERT_FALSE(set.representatives.empty());
  bool plane = false, pos_e3 = false, neg_e3 = false;
  for (size_t i = 0; i < set.representatives.size(); ++i) {
    const Vec& x = set.representatives[i];
    EXPECT_NEAR(x.norm(), 1.0, 1e-12);
    EXPECT_LE(set.residual_norms[i], opts.tol);
    // Independent membership test against the symbolic zero set.
    const bool on_plane = std::abs(x[2]) < 1e-6;
    const bool on_axis = std::hypot(x[0], x[1]) < 1e-6;
    EXPECT_TRUE(on_plane || on_axis);
    plane |= on_plane;
    pos_e3 |= on_axis && x[2] > 0;
    neg_e3 |= on_axis && x[2] < 0;
  }
  EXPECT_TRUE(plane && pos_e3 && neg_e3);
  const auto spans = branch_spans(set);
  ASSERT_EQ(spans.size(), 2u);
  EXPECT_EQ(spans[0].span_dim + spans[1].span_dim, 3);
  // Representatives are pairwise separated and never positive multiples of each other.
  for (size_t i = 0; i < set.representatives.size(); ++i) {
    for (size_t j = i + 1; j < set.representatives.size(); ++j) {
      EXPECT_GT((set.representatives[i] - set.representatives[j]).norm(), 1e-4);
    }
  }
  // The plane branch is a circle on the sphere (local dim 1); the axis points are isolated.
  for (size_t i = 0; i < set.representatives.size(); ++i) {
    const bool on_axis = std::hypot(set.representatives[i][0], set.representatives[i][1]) < 1e-6;
    EXPECT_EQ(set.local_dims[i], on_axis ? 0 : 1);
  }
}

TEST(FindGeodesicVectors, SU2WholeSphere) {
  SolverOptions opts;
  opts.samples = 300;
  const auto set = find_geodesic_vectors(su2(), euclid3(), opts);
  EXPECT_EQ(set.converged, 300);
  EXPECT_EQ(set.representatives.size(), 300u);
  EXPECT_EQ(set.branch_count(), 1);
  for (int d : set.local_dims) EXPECT_EQ(d, 2);
}

TEST(FindGeodesicVectors, Deterministic) {
  SolverOptions opts;
  opts.samples = 200;
  const auto norm = make_randers(Mat::Identity(3, 3), Vec(0.5 * unit(3, 0)));
  const auto a = find_geodesic_vectors(h3(), norm, opts);
  const auto b = find_geodesic_vectors(h3(), norm, opts);
  ASSERT_EQ(a.representatives.size(), b.representatives.size());
  for (size_t i = 0; i < a.representatives.size(); ++i) EXPECT_EQ(a.representatives[i], b.representatives[i]);
  EXPECT_THROW(find_geodesic_vectors(h3(), norm, SolverOptions{.tol = 0.0}), ValidationError);
}

TEST(NaturallyReductive, SU2PassesH3Fails) {
  EXPECT_TRUE(check_naturally_reductive(su2(), euclid3(), 100, 1, 1e-10).passed);
  EXPECT_TRUE(check_minkowski_lie_algebra(su2().algebra(), euclid3(), 100, 1, 1e-10).passed);
  const ScanReport h = check_naturally_reductive(h3(), euclid3(), 100, 1);
  EXPECT_FALSE(h.passed);
  EXPECT_GT(h.max_residual, 0.1);
  EXPECT_GE(h.witness_x, 0);
  EXPECT_EQ(h.witness_y.size(), 3);
  // The logged witness reproduces the reported residual.
  const double again = natural_reductive_residual(h3(), euclid3(), h.witness_y, unit(3, h.witness_x),
                                                  unit(3, h.witness_u), unit(3, h.witness_v));
  EXPECT_NEAR(std::abs(again), h.max_residual, 1e-12);
  EXPECT_FALSE(check_minkowski_lie_algebra(h3().algebra(), euclid3(), 50, 1).passed);
}

TEST(NaturallyReductive, AbelianIsExactlyZero) {
  const auto ab = algebras::abelian(3);
  const auto norm = make_randers(Mat::Identity(3, 3), Vec(0.4 * unit(3, 1)));
  const ScanReport r = check_minkowski_lie_algebra(ab, norm, 50, 3);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.max_residual, 0.0);
}

TEST(NaturallyReductive, RiemannianReducesToClassicalForm) {
  std::mt19937_64 rng(6);
  for (const auto* dec : {&h3(), &su2()}) {
    for (int k = 0; k < 50; ++k) {
      const Mat a = oracle::random_spd(3, rng);
      const auto norm = MinkowskiNorm::euclidean(a);
      const Vec y = random_gaussian_vector(3, rng), x = random_gaussian_vector(3, rng);
      const Vec u = random_gaussian_vector(3, rng), v = random_gaussian_vector(3, rng);
      const double lhs = natural_reductive_residual(*dec, norm, y, x, u, v);
      const double rhs = classical_natural_reductive_residual(*dec, a, x, u, v);
      EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST(RandersIdentity, HoldsOnRandomInputs) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ud(0.0, 0.9);
  for (int k = 0; k < 200; ++k) {
    const auto& dec = k % 2 ? h3() : su2();
    const Mat a = oracle::random_spd(3, rng);
    const Vec X = a.ldlt().solve(oracle::covector_with_norm(a, ud(rng), rng));
    const Vec y = random_gaussian_vector(3, rng), z = random_gaussian_vector(3, rng);
    const IdentitySides s = randers_residual_identity(dec, a, X, y, z);
    EXPECT_NEAR(s.lhs, s.rhs, 1e-9 * std::max(1.0, std::abs(s.rhs)));
  }
}

TEST(RandersIdentity, SpecialCases) {
  const Mat a = Mat::Identity(3, 3);
  // [y, z] = 0 when z is parallel to y.
  const Vec y = Vec::Random(3);
  const IdentitySides s = randers_residual_identity(su2(), a, Vec(0.3 * unit(3, 1)), y, 2.0 * y);
  EXPECT_NEAR(s.lhs, 0.0, 1e-15);
  EXPECT_NEAR(s.rhs, 0.0, 1e-15);
  // X = 0: Riemannian.
  const Vec z = Vec::Random(3);
  const IdentitySides r = randers_residual_identity(su2(), a, Vec::Zero(3), y, z);
  EXPECT_NEAR(r.lhs, y.dot(bracket(su2().algebra(), y, z)), 1e-14);
  EXPECT_THROW(randers_residual_identity(su2(), a, Vec::Zero(3), Vec::Zero(3), z), DegenerateVector);
}

TEST(RandersIdentity, GeodesicFactorAtXfield) {
  // Residual of F at y = X equals the a-residual times (1 + |X| + F(X)).
  std::mt19937_64 rng(8);
  for (int k = 0; k < 50; ++k) {
    const Mat a = oracle::random_spd(3, rng);
    const Vec X = a.ldlt().solve(oracle::covector_with_norm(a, 0.8, rng));
    const auto F = make_randers(a, a * X);
    const auto A = MinkowskiNorm::euclidean(a);
    const double factor = randers_geodesic_factor(a, X);
    const double alpha = std::sqrt(X.dot(a * X));
    EXPECT_NEAR(factor, (1 + alpha) * (1 + alpha), 1e-12);
    const Vec rF = geodesic_residual(h3(), F, X).residual;
    const Vec rA = geodesic_residual(h3(), A, X).residual;
    EXPECT_LT((rF - factor * rA).norm(), 1e-10);
  }
}

TEST(RandersZeroSet, OrthogonalFieldMatchesRiemannian) {
  // X = 0.5 e1 satisfies a(X, [y, z]) = 0 on H3, so the zero sets coincide.
  const auto F = make_randers(Mat::Identity(3, 3), Vec(0.5 * unit(3, 0)));
  const int n = 21;
  int mismatches = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Vec x(3);
        x << (i - 10) / 10.0, (j - 10) / 10.0, (k - 10) / 10.0;
        if (x.norm() == 0.0) continue;
        const bool zf = geodesic_residual(h3(), F, x).norm() <= 1e-8;
        const bool za = geodesic_residual(h3(), euclid3(), x).norm() <= 1e-8;
        mismatches += zf != za;
      }
    }
  }
  EXPECT_EQ(mismatches, 0);
}

TEST(RandersZeroSet, VerticalFieldDiffersFromRiemannian) {
  // For X = 0.5 e3 the F-residual is F(y) (y3/alpha + 1/2) (-y2, y1, 0): the
  // plane y3 = 0 drops out and the cone y3 = -alpha/2 appears.
  const auto F = make_randers(Mat::Identity(3, 3), Vec(0.5 * unit(3, 2)));
  Vec on_plane(3);
  on_plane << 1, 0, 0;
  EXPECT_LE(geodesic_residual(h3(), euclid3(), on_plane).norm(), 1e-15);
  EXPECT_NEAR(geodesic_residual(h3(), F, on_plane).norm(), 0.5, 1e-14);
  Vec on_cone(3);
  on_cone << 1, 0, -1.0 / std::sqrt(3.0);
  EXPECT_LE(geodesic_residual(h3(), F, on_cone).norm(), 1e-14);
  EXPECT_GT(geodesic_residual(h3(), euclid3(), on_cone).norm(), 0.1);
  EXPECT_LE(geodesic_residual(h3(), F, unit(3, 2)).norm(), 1e-15);
}
