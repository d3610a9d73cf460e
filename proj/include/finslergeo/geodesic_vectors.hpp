#pragma once

// Geodesic vectors of a homogeneous Finsler space G/H with reductive
// decomposition g = m (+) h and an invariant Minkowski norm on m.
//
// X is a geodesic vector iff g_{X_m}(X_m, [X, Y]_m) = 0 for every Y in m.
// The residual below evaluates that form on the m basis.

#include "finslergeo/lie_algebra.hpp"
#include "finslergeo/minkowski_norm.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace finslergeo {

struct GeodesicResidual {
  Vec x;
  /// r_j = g_{X_m}(X_m, [X, e_j]_m) over the m basis.
  Vec residual;
  std::string norm_label;

  double norm() const { return residual.norm(); }
};

/// Norm lives on m (norm.dim() == dec.m_dim()). Throws DegenerateVector when
/// X_m = 0, DimensionMismatch on size errors.
GeodesicResidual geodesic_residual(const ReductiveDecomposition& dec, const MinkowskiNorm& norm, const Vec& x);

struct SolverOptions {
  int samples = 4096;
  int newton_iters = 50;
  double tol = 1e-9;
  /// Representatives closer than this great-circle distance are merged.
  double dedup_angle = 1e-3;
  /// Single-linkage distance used to group representatives into branches.
  double branch_link = 0.15;
};

enum class SeedOutcome { Converged, NoConvergence, Degenerate };

struct GeodesicVectorSet {
  /// Unit vectors in g (h components zero), sorted lexicographically.
  std::vector<Vec> representatives;
  std::vector<double> residual_norms;
  /// Connected-component tag per representative, numbered in order of appearance.
  std::vector<int> branch_labels;
  /// Estimated dimension of the zero set on the sphere near each representative.
  std::vector<int> local_dims;
  double tolerance = 0.0;
  int seeds = 0;
  int converged = 0;
  int no_convergence = 0;
  int degenerate = 0;

  int branch_count() const;
};

/// Damped Gauss-Newton on the unit sphere of m from low-discrepancy seeds,
/// with a pseudo-inverse step so positive-dimensional zero sets are fine.
/// Every returned representative re-verifies against geodesic_residual.
GeodesicVectorSet find_geodesic_vectors(const ReductiveDecomposition& dec, const MinkowskiNorm& norm,
                                        const SolverOptions& opts = {});

/// Components of a GeodesicVectorSet grouped by the linear subspace their
/// representatives span; antipodal components of one line merge here.
struct BranchSpan {
  std::vector<int> components;
  int members = 0;
  int span_dim = 0;
  /// Orthonormal basis of the span (columns, full g coordinates).
  Mat basis;
};

std::vector<BranchSpan> branch_spans(const GeodesicVectorSet& set, double rank_tol = 1e-6);

/// Result of an identity scan. Witness indices are basis indices into m (0-based).
struct ScanReport {
  bool passed = true;
  double max_residual = 0.0;
  double tol = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
  Vec witness_y;
  int witness_x = -1;
  int witness_u = -1;
  int witness_v = -1;
};

/// g_y([x,u],v) + g_y(u,[x,v]) + 2 C_y([x,y],u,v), all in g.
double minkowski_lie_residual(const LieAlgebra& alg, const MinkowskiNorm& norm, const Vec& y, const Vec& x,
                              const Vec& u, const Vec& v);
/// Same with brackets projected to m; y, x, u, v are full vectors lying in m.
double natural_reductive_residual(const ReductiveDecomposition& dec, const MinkowskiNorm& norm, const Vec& y,
                                  const Vec& x, const Vec& u, const Vec& v);
/// <[x,y]_m, z> + <y, [x,z]_m> for the inner product `a` on m.
double classical_natural_reductive_residual(const ReductiveDecomposition& dec, const Mat& a, const Vec& x,
                                            const Vec& y, const Vec& z);

/// Scans `samples` uniform y on the unit sphere; at each y every basis triple
/// (x, u, v) is checked, which covers all x, u, v by trilinearity.
ScanReport check_minkowski_lie_algebra(const LieAlgebra& alg, const MinkowskiNorm& norm, int samples,
                                       std::uint64_t seed = 0, double tol = 1e-8);
ScanReport check_naturally_reductive(const ReductiveDecomposition& dec, const MinkowskiNorm& norm, int samples,
                                     std::uint64_t seed = 0, double tol = 1e-8);

struct IdentitySides {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// For the Randers norm F(y) = sqrt(a(y,y)) + a(X, y):
///   lhs = g_{y_m}(y_m, [y,z]_m) through the generic tensor path,
///   rhs = a(y_m,[y,z]_m) F(y_m)/sqrt(a(y_m,y_m)) + a(X,[y,z]_m) F(y_m).
/// Throws DegenerateVector when y_m = 0.
IdentitySides randers_residual_identity(const ReductiveDecomposition& dec, const Mat& a, const Vec& xfield,
                                        const Vec& y, const Vec& z);

/// 1 + sqrt(a(X,X)) + F(X): g_X(X, W) = a(X, W) times this factor for the Randers norm built from (a, X).
double randers_geodesic_factor(const Mat& a, const Vec& xfield);

}  // namespace finslergeo
