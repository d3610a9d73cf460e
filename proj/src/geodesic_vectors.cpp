#include "finslergeo/geodesic_vectors.hpp"

#include "finslergeo/errors.hpp"
#include "finslergeo/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace finslergeo {

namespace {

void require_norm_on_m(const ReductiveDecomposition& dec, const MinkowskiNorm& norm) {
  if (norm.dim() != dec.m_dim()) {
    throw DimensionMismatch("norm dimension " + std::to_string(norm.dim()) + " does not match dim m = " +
                            std::to_string(dec.m_dim()));
  }
}

/// r_j = (1/2) D(F^2)(X_m)[[X, e_j]_m], which equals g_{X_m}(X_m, [X,e_j]_m)
/// by Euler's relation. Written over S so the Jacobian comes from duals.
template <class S>
std::vector<S> euler_residual(const ReductiveDecomposition& dec, const MinkowskiNorm& norm, std::span<const S> x) {
  const int n = dec.dim();
  const int m = dec.m_dim();
  std::vector<S> xm(m);
  for (int a = 0; a < m; ++a) xm[a] = x[dec.m_indices()[a]];
  std::vector<S> basis(n, S(0.0));
  std::vector<S> w(n);
  std::vector<S> wm(m);
  std::vector<S> r(m);
  for (int a = 0; a < m; ++a) {
    const int j = dec.m_indices()[a];
    basis[j] = S(1.0);
    dec.algebra().bracket_into<S>(x, basis, w);
    basis[j] = S(0.0);
    for (int b = 0; b < m; ++b) wm[b] = w[dec.m_indices()[b]];
    r[a] = euler_form<S>(norm, xm, wm);
  }
  return r;
}

Vec residual_values(const ReductiveDecomposition& dec, const MinkowskiNorm& norm, const Vec& x) {
  auto r = euler_residual<double>(dec, norm, std::span<const double>(x.data(), x.size()));
  return Eigen::Map<const Vec>(r.data(), static_cast<Eigen::Index>(r.size()));
}

/// Jacobian of the residual with respect to the m coordinates of x.
Mat residual_jacobian(const ReductiveDecomposition& dec, const MinkowskiNorm& norm, const Vec& x) {
  const int n = dec.dim();
  const int m = dec.m_dim();
  Mat jac(m, m);
  std::vector<D1> seeded(n);
  for (int c = 0; c < m; ++c) {
    for (int i = 0; i < n; ++i) seeded[i] = D1(x[i], i == dec.m_indices()[c] ? 1.0 : 0.0);
    auto r = euler_residual<D1>(dec, norm, seeded);
    for (int a = 0; a < m; ++a) jac(a, c) = r[a].d;
  }
  return jac;
}

struct SeedResult {
  SeedOutcome outcome = SeedOutcome::NoConvergence;
  Vec xm;  // unit, m coordinates
};

SeedResult newton_on_sphere(const ReductiveDecomposition& dec, const MinkowskiNorm& norm, Vec xm,
                            const SolverOptions& opts) {
  SeedResult out;
  const int m = dec.m_dim();
  xm.normalize();
  Vec r = residual_values(dec, norm, dec.embed_m(xm));
  double rn = r.norm();
  for (int it = 0; it <= opts.newton_iters; ++it) {
    if (!std::isfinite(rn)) break;
    if (rn <= opts.tol) {
      out.outcome = SeedOutcome::Converged;
      out.xm = xm;
      return out;
    }
    if (it == opts.newton_iters) break;
    const Mat proj = Mat::Identity(m, m) - xm * xm.transpose();
    const Mat a = residual_jacobian(dec, norm, dec.embed_m(xm)) * proj;
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    const Vec step = proj * svd.solve(-r);
    bool accepted = false;
    for (double lambda = 1.0; lambda > 1e-6; lambda *= 0.5) {
      Vec trial = xm + lambda * step;
      trial.normalize();
      const Vec rt = residual_values(dec, norm, dec.embed_m(trial));
      if (rt.norm() < rn) {
        xm = trial;
        r = rt;
        rn = rt.norm();
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  out.xm = xm;
  return out;
}

int local_dimension(const ReductiveDecomposition& dec, const MinkowskiNorm& norm, const Vec& xm) {
  const int m = dec.m_dim();
  const Mat proj = Mat::Identity(m, m) - xm * xm.transpose();
  const Mat a = residual_jacobian(dec, norm, dec.embed_m(xm)) * proj;
  Eigen::JacobiSVD<Mat> svd(a);
  const Vec s = svd.singularValues();
  const double cutoff = 1e-6 * std::max(1.0, s.size() ? s[0] : 0.0);
  int zeros = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] <= cutoff) ++zeros;
  }
  return std::max(0, zeros - 1);  // the radial direction is always in the kernel
}

double angle_between(const Vec& a, const Vec& b) {
  return std::atan2((a - b * a.dot(b)).norm(), a.dot(b));
}

}  // namespace

GeodesicResidual geodesic_residual(const ReductiveDecomposition& dec, const MinkowskiNorm& norm, const Vec& x) {
  require_norm_on_m(dec, norm);
  require_dim(x, dec.dim(), "geodesic_residual X");
  const Vec xm = dec.m_coords(x);
  if (xm.cwiseAbs().maxCoeff() == 0.0) throw DegenerateVector("geodesic_residual: X_m = 0");
  const FundamentalTensor g = fundamental_tensor(norm, xm);
  const int m = dec.m_dim();
  GeodesicResidual out{x, Vec(m), norm.label()};
  for (int a = 0; a < m; ++a) {
    Vec e = Vec::Zero(dec.dim());
    e[dec.m_indices()[a]] = 1.0;
    const Vec w = dec.m_coords(project_m(dec, bracket(dec.algebra(), x, e)));
    out.residual[a] = g(xm, w);
  }
  return out;
}

int GeodesicVectorSet::branch_count() const {
  int n = 0;
  for (int b : branch_labels) n = std::max(n, b + 1);
  return n;
}

GeodesicVectorSet find_geodesic_vectors(const ReductiveDecomposition& dec, const MinkowskiNorm& norm,
                                        const SolverOptions& opts) {
  require_norm_on_m(dec, norm);
  if (!(opts.tol > 0.0)) throw ValidationError("find_geodesic_vectors: tol must be positive");
  const int m = dec.m_dim();
  const std::vector<Vec> seeds = low_discrepancy_sphere(m, opts.samples);
  std::vector<SeedResult> results(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), [&](int i) {
    try {
      results[i] = newton_on_sphere(dec, norm, seeds[i], opts);
    } catch (const DegenerateVector&) {
      results[i].outcome = SeedOutcome::Degenerate;
    } catch (const SingularTensor&) {
      results[i].outcome = SeedOutcome::Degenerate;
    }
  });

  GeodesicVectorSet set;
  set.tolerance = opts.tol;
  set.seeds = static_cast<int>(seeds.size());
  std::vector<Vec> found;
  for (const SeedResult& r : results) {
    switch (r.outcome) {
      case SeedOutcome::Converged:
        ++set.converged;
        found.push_back(r.xm);
        break;
      case SeedOutcome::NoConvergence:
        ++set.no_convergence;
        break;
      case SeedOutcome::Degenerate:
        ++set.degenerate;
        break;
    }
  }
  std::sort(found.begin(), found.end(), [](const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });

  std::vector<Vec> reps;
  for (const Vec& v : found) {
    bool duplicate = false;
    for (const Vec& r : reps) {
      if (angle_between(v, r) < opts.dedup_angle) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;
    // Soundness: re-verify under the full-tensor path before accepting.
    const GeodesicResidual check = geodesic_residual(dec, norm, dec.embed_m(v));
    if (check.norm() > opts.tol) continue;
    reps.push_back(v);
    set.representatives.push_back(dec.embed_m(v));
    set.residual_norms.push_back(check.norm());
  }

  // Single-linkage components. The link distance never drops below 1.5x the
  // typical seed spacing, so a zero set covering the sphere stays one piece.
  double link = opts.branch_link;
  if (m >= 2 && !seeds.empty()) {
    const double area = 2.0 * std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m);
    link = std::max(link, 1.5 * std::pow(area / static_cast<double>(seeds.size()), 1.0 / (m - 1)));
  }
  const int count = static_cast<int>(reps.size());
  std::vector<int> parent(count);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      if (angle_between(reps[i], reps[j]) < link) {
        const int a = find(i);
        const int b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<int> label_of_root(count, -1);
  int next_label = 0;
  for (int i = 0; i < count; ++i) {
    const int root = find(i);
    if (label_of_root[root] < 0) label_of_root[root] = next_label++;
    set.branch_labels.push_back(label_of_root[root]);
    set.local_dims.push_back(local_dimension(dec, norm, reps[i]));
  }
  return set;
}

double natural_reductive_residual(const ReductiveDecomposition& dec, const MinkowskiNorm& norm, const Vec& y,
                                  const Vec& x, const Vec& u, const Vec& v) {
  require_norm_on_m(dec, norm);
  const LieAlgebra& alg = dec.algebra();
  const Vec ym = dec.m_coords(y);
  const FundamentalTensor g = fundamental_tensor(norm, ym);
  const CartanTensor c = cartan_tensor(norm, ym);
  const Vec um = dec.m_coords(u);
  const Vec vm = dec.m_coords(v);
  const Vec xu = dec.m_coords(project_m(dec, bracket(alg, x, u)));
  const Vec xv = dec.m_coords(project_m(dec, bracket(alg, x, v)));
  const Vec xy = dec.m_coords(project_m(dec, bracket(alg, x, y)));
  return g(xu, vm) + g(um, xv) + 2.0 * c.contract(xy, um, vm);
}

double minkowski_lie_residual(const LieAlgebra& alg, const MinkowskiNorm& norm, const Vec& y, const Vec& x,
                              const Vec& u, const Vec& v) {
  return natural_reductive_residual(ReductiveDecomposition(alg), norm, y, x, u, v);
}

double classical_natural_reductive_residual(const ReductiveDecomposition& dec, const Mat& a, const Vec& x,
                                            const Vec& y, const Vec& z) {
  const LieAlgebra& alg = dec.algebra();
  const Vec xy = dec.m_coords(project_m(dec, bracket(alg, x, y)));
  const Vec xz = dec.m_coords(project_m(dec, bracket(alg, x, z)));
  return xy.dot(a * dec.m_coords(z)) + dec.m_coords(y).dot(a * xz);
}

namespace {

ScanReport scan_identity(const ReductiveDecomposition& dec, const MinkowskiNorm& norm, int samples,
                         std::uint64_t seed, double tol) {
  require_norm_on_m(dec, norm);
  const LieAlgebra& alg = dec.algebra();
  const int m = dec.m_dim();
  // [e_a, e_b]_m in m coordinates for a, b indexing the m basis.
  std::vector<Vec> basis_bracket(static_cast<size_t>(m) * m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      Vec ea = Vec::Zero(dec.dim());
      Vec eb = Vec::Zero(dec.dim());
      ea[dec.m_indices()[a]] = 1.0;
      eb[dec.m_indices()[b]] = 1.0;
      basis_bracket[static_cast<size_t>(a) * m + b] = dec.m_coords(project_m(dec, bracket(alg, ea, eb)));
    }
  }
  ScanReport rep;
  rep.tol = tol;
  rep.samples = samples;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Vec ym = random_unit_vector(m, rng);
    const FundamentalTensor g = fundamental_tensor(norm, ym);
    const CartanTensor c = cartan_tensor(norm, ym);
    for (int xa = 0; xa < m; ++xa) {
      Vec xy = Vec::Zero(m);
      for (int b = 0; b < m; ++b) xy += ym[b] * basis_bracket[static_cast<size_t>(xa) * m + b];
      for (int ua = 0; ua < m; ++ua) {
        const Vec& xu = basis_bracket[static_cast<size_t>(xa) * m + ua];
        for (int va = 0; va < m; ++va) {
          const Vec& xv = basis_bracket[static_cast<size_t>(xa) * m + va];
          double cterm = 0.0;
          for (int i = 0; i < m; ++i) cterm += c(i, ua, va) * xy[i];
          const double res = std::abs((g.matrix.col(va).dot(xu)) + (g.matrix.col(ua).dot(xv)) + 2.0 * cterm);
          if (res > rep.max_residual || rep.witness_x < 0) {
            rep.max_residual = std::max(rep.max_residual, res);
            rep.witness_y = dec.embed_m(ym);
            rep.witness_x = xa;
            rep.witness_u = ua;
            rep.witness_v = va;
          }
        }
      }
    }
  }
  rep.passed = rep.max_residual <= tol;
  return rep;
}

}  // namespace

ScanReport check_minkowski_lie_algebra(const LieAlgebra& alg, const MinkowskiNorm& norm, int samples,
                                       std::uint64_t seed, double tol) {
  return scan_identity(ReductiveDecomposition(alg), norm, samples, seed, tol);
}

ScanReport check_naturally_reductive(const ReductiveDecomposition& dec, const MinkowskiNorm& norm, int samples,
                                     std::uint64_t seed, double tol) {
  return scan_identity(dec, norm, samples, seed, tol);
}

IdentitySides randers_residual_identity(const ReductiveDecomposition& dec, const Mat& a, const Vec& xfield,
                                        const Vec& y, const Vec& z) {
  const int m = dec.m_dim();
  require_dim(xfield, m, "randers_residual_identity X");
  require_dim(y, dec.dim(), "randers_residual_identity y");
  require_dim(z, dec.dim(), "randers_residual_identity z");
  const MinkowskiNorm norm = MinkowskiNorm::randers(a, a * xfield);
  const Vec ym = dec.m_coords(y);
  if (ym.cwiseAbs().maxCoeff() == 0.0) throw DegenerateVector("randers_residual_identity: y_m = 0");
  const Vec w = dec.m_coords(project_m(dec, bracket(dec.algebra(), y, z)));
  IdentitySides out;
  out.lhs = fundamental_tensor(norm, ym)(ym, w);
  const double f = norm(ym);
  const double alpha = std::sqrt(ym.dot(a * ym));
  out.rhs = ym.dot(a * w) * (f / alpha) + xfield.dot(a * w) * f;
  return out;
}

double randers_geodesic_factor(const Mat& a, const Vec& xfield) {
  const double ax = std::sqrt(xfield.dot(a * xfield));
  const MinkowskiNorm norm = MinkowskiNorm::randers(a, a * xfield);
  return 1.0 + ax + norm(xfield);
}

std::vector<BranchSpan> branch_spans(const GeodesicVectorSet& set, double rank_tol) {
  std::vector<BranchSpan> spans;
  const int ncomp = set.branch_count();
  for (int c = 0; c < ncomp; ++c) {
    std::vector<int> idx;
    for (size_t i = 0; i < set.branch_labels.size(); ++i) {
      if (set.branch_labels[i] == c) idx.push_back(static_cast<int>(i));
    }
    const int n = static_cast<int>(set.representatives[idx.front()].size());
    Mat cols(n, static_cast<int>(idx.size()));
    for (size_t k = 0; k < idx.size(); ++k) cols.col(static_cast<int>(k)) = set.representatives[idx[k]];
    Eigen::JacobiSVD<Mat> svd(cols, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int k = 0; k < sv.size(); ++k) {
      if (sv[k] > rank_tol * sv[0]) ++rank;
    }
    const Mat basis = svd.matrixU().leftCols(rank);
    bool merged = false;
    for (auto& sp : spans) {
      if (sp.span_dim != rank) continue;
      // Same subspace iff the projectors agree.
      if ((sp.basis * sp.basis.transpose() - basis * basis.transpose()).cwiseAbs().maxCoeff() < 1e-6) {
        sp.components.push_back(c);
        sp.members += static_cast<int>(idx.size());
        merged = true;
        break;
      }
    }
    if (!merged) spans.push_back({{c}, static_cast<int>(idx.size()), rank, basis});
  }
  return spans;
}

}  // namespace finslergeo
