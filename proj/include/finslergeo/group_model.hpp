#pragma once

// Concrete Lie groups in explicit chart coordinates, and the left-invariant
// Finsler metrics they carry. All built-in models have trivial isotropy,
// so the homogeneous space is the group itself and m = g.

#include "finslergeo/lie_algebra.hpp"
#include "finslergeo/minkowski_norm.hpp"

#include <memory>
#include <string>
#include <vector>

namespace finslergeo {

class GroupModel {
 public:
  explicit GroupModel(LieAlgebra algebra) : algebra_(std::move(algebra)), dec_(algebra_) {}
  virtual ~GroupModel() = default;

  virtual std::string name() const = 0;
  int dim() const { return algebra_.dim(); }
  const LieAlgebra& algebra() const { return algebra_; }
  /// m = g, h = 0.
  const ReductiveDecomposition& decomposition() const { return dec_; }

  Vec identity() const { return Vec::Zero(dim()); }
  virtual Vec multiply(const Vec& p, const Vec& q) const = 0;
  virtual Vec inverse(const Vec& p) const = 0;
  /// exp(tX) in chart coordinates; the chart is normalized so that
  /// d/dt exp_map(X, t) at t = 0 equals X.
  virtual Vec exp_map(const Vec& x, double t) const = 0;

  /// Jacobian of q -> p * q at q. Default: 4th-order central differences, step 1e-5.
  virtual Mat dleft_matrix(const Vec& p, const Vec& q) const;
  /// Differential of L_p at q applied to v.
  Vec dleft(const Vec& p, const Vec& q, const Vec& v) const { return dleft_matrix(p, q) * v; }
  /// Differential of L_p at the identity applied to v.
  Vec dleft(const Vec& p, const Vec& v) const { return dleft(p, identity(), v); }

  /// Linear map T_x G -> g given by d(L_{x^{-1}}) at x.
  virtual Mat left_trivialization(const Vec& x) const { return dleft_matrix(inverse(x), x); }

  /// Throws ChartDomain when x leaves the region where the chart is usable.
  virtual void check_domain(const Vec& x) const;

 private:
  LieAlgebra algebra_;
  ReductiveDecomposition dec_;
};

/// Heisenberg group H3 in exponential coordinates:
/// (a,b,c)(a',b',c') = (a+a', b+b', c+c'+(ab'-a'b)/2). Global chart.
class Heisenberg3 final : public GroupModel {
 public:
  Heisenberg3() : GroupModel(algebras::heisenberg3()) {}
  std::string name() const override { return "heisenberg3"; }
  Vec multiply(const Vec& p, const Vec& q) const override;
  Vec inverse(const Vec& p) const override;
  Vec exp_map(const Vec& x, double t) const override;
  Mat dleft_matrix(const Vec& p, const Vec& q) const override;
  Mat left_trivialization(const Vec& x) const override;
};

/// Unit quaternion (w, x, y, z).
struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Quaternion operator*(const Quaternion& o) const;
  Quaternion conjugate() const { return {w, -x, -y, -z}; }
  double norm() const;
  Quaternion normalized() const;
};

/// SU(2) as unit quaternions. Basis e_k of su(2) maps to (i, j, k)_k / 2,
/// so [e1, e2] = e3 cyclically. Chart coordinates are canonical
/// (exponential) coordinates x in R^3 with |x| < 2 pi; points are
/// multiplied as quaternions and renormalized after every product.
class SU2 final : public GroupModel {
 public:
  /// Chart radius beyond which check_domain throws.
  static constexpr double kChartRadius = 6.0;

  SU2() : GroupModel(algebras::su2()) {}
  std::string name() const override { return "su2"; }
  Vec multiply(const Vec& p, const Vec& q) const override;
  Vec inverse(const Vec& p) const override;
  Vec exp_map(const Vec& x, double t) const override;
  Mat dleft_matrix(const Vec& p, const Vec& q) const override;
  Mat left_trivialization(const Vec& x) const override;
  void check_domain(const Vec& x) const override;

  static Quaternion to_quaternion(const Vec& x);
  /// Principal logarithm, rotation angle in [0, 2 pi).
  static Vec from_quaternion(const Quaternion& q);
};

/// R^n under addition.
class Abelian final : public GroupModel {
 public:
  explicit Abelian(int dim) : GroupModel(algebras::abelian(dim)) {}
  std::string name() const override { return "abelian" + std::to_string(dim()); }
  Vec multiply(const Vec& p, const Vec& q) const override { return p + q; }
  Vec inverse(const Vec& p) const override { return -p; }
  Vec exp_map(const Vec& x, double t) const override { return t * x; }
  Mat dleft_matrix(const Vec&, const Vec&) const override { return Mat::Identity(dim(), dim()); }
  Mat left_trivialization(const Vec&) const override { return Mat::Identity(dim(), dim()); }
};

/// "heisenberg3", "su2", or "abelian<n>". Throws ValidationError otherwise.
std::shared_ptr<const GroupModel> make_group_model(const std::string& name);

struct OrbitPoint {
  double t = 0.0;
  Vec point;
  Vec velocity;
};

/// p * exp(tX), the image of the one-parameter subgroup under the isometry
/// L_p, with its velocity dL_{gamma(t)} X. Throws DegenerateVector for X = 0
/// and ChartDomain when a sample leaves the chart.
std::vector<OrbitPoint> orbit_curve(const GroupModel& model, const Vec& x, const Vec& p, std::span<const double> ts);

/// Left-invariant Finsler function F(x, y) = norm(dL_{x^{-1}} y).
class ChartMetric {
 public:
  /// Throws DimensionMismatch when norm.dim() != model.dim().
  ChartMetric(std::shared_ptr<const GroupModel> model, MinkowskiNorm norm);

  const GroupModel& model() const { return *model_; }
  std::shared_ptr<const GroupModel> model_ptr() const { return model_; }
  const MinkowskiNorm& norm() const { return norm_; }
  int dim() const { return norm_.dim(); }

  double F(const Vec& x, const Vec& y) const;
  /// F(x, .) evaluated on an already-trivialized frame, i.e. norm(J y).
  template <class S>
  S squared_with(const Mat& trivialization, std::span<const S> y) const;

 private:
  std::shared_ptr<const GroupModel> model_;
  MinkowskiNorm norm_;
};

ChartMetric induced_chart_metric(std::shared_ptr<const GroupModel> model, const MinkowskiNorm& norm);

// ---------------------------------------------------------------------------

template <class S>
S ChartMetric::squared_with(const Mat& trivialization, std::span<const S> y) const {
  const int n = dim();
  std::vector<S> ty(n, S(0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double m = trivialization(i, j);
      if (m != 0.0) ty[i] += y[j] * m;
    }
  }
  return norm_.squared(std::span<const S>(ty));
}

}  // namespace finslergeo
