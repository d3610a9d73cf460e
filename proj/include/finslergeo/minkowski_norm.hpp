#pragma once

// Minkowski norms with exact derivatives up to third order.
//
// F^2 is evaluated generically over nested dual numbers, so the
// fundamental tensor g_y = (1/2) Hess(F^2) and the Cartan tensor
// C_y = (1/4) D^3(F^2) carry no truncation error. Randers norms also have
// closed forms for both tensors, kept as an independent route.

#include "finslergeo/dual.hpp"
#include "finslergeo/linalg.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace finslergeo {

/// User-supplied F. It is always called with third-order jets; the library
/// lifts and lowers to whatever order it needs. Must be positively
/// 1-homogeneous and strongly convex; neither is checked at construction.
using CustomNormFn = std::function<D3(std::span<const D3>)>;

class MinkowskiNorm {
 public:
  enum class Kind { Euclidean, Randers, Custom };

  /// F(y) = sqrt(y^T a y). Throws NotPositiveDefinite.
  static MinkowskiNorm euclidean(const Mat& a);
  /// F(y) = sqrt(y^T a y) + b.y. Throws NotPositiveDefinite, NonConvexNorm (|b|_a >= 1).
  static MinkowskiNorm randers(const Mat& a, const Vec& b);
  static MinkowskiNorm custom(int dim, CustomNormFn fn, std::string label = "custom");

  int dim() const { return dim_; }
  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  /// Quadratic part; identity-sized zero matrix for Custom norms.
  const Mat& a() const { return a_; }
  /// Covector part; zero except for Randers.
  const Vec& b() const { return b_; }
  /// a^{-1} b, computed at construction.
  const Vec& b_sharp() const { return b_sharp_; }
  /// sqrt(b_i a^{ij} b_j).
  double b_norm() const { return b_norm_; }
  /// True for Euclidean norms and Randers norms with b = 0.
  bool is_riemannian() const;

  template <class S>
  S squared(std::span<const S> y) const;
  template <class S>
  S value(std::span<const S> y) const;

  /// F(y); F(0) = 0. Throws DimensionMismatch.
  double operator()(const Vec& y) const;

 private:
  MinkowskiNorm() = default;

  template <class S>
  S quadratic(std::span<const S> y) const;
  template <class S>
  S linear(std::span<const S> y) const;
  template <class S>
  S custom_value(std::span<const S> y) const;

  Kind kind_ = Kind::Euclidean;
  int dim_ = 0;
  std::string label_;
  Mat a_;
  Vec b_;
  Vec b_sharp_;
  double b_norm_ = 0.0;
  std::shared_ptr<const CustomNormFn> custom_;
};

struct FundamentalTensor {
  Vec base_y;
  Mat matrix;

  /// g_y(u, v).
  double operator()(const Vec& u, const Vec& v) const { return u.dot(matrix * v); }
};

struct CartanTensor {
  Vec base_y;
  int n = 0;
  std::vector<double> entries;  // row-major n^3

  double operator()(int i, int j, int k) const { return entries[(static_cast<size_t>(i) * n + j) * n + k]; }
  double& at(int i, int j, int k) { return entries[(static_cast<size_t>(i) * n + j) * n + k]; }
  /// C_y(u, v, w).
  double contract(const Vec& u, const Vec& v, const Vec& w) const;
  double max_abs() const;
};

double eval_norm(const MinkowskiNorm& norm, const Vec& y);

/// (1/2) Hess(F^2) at y by nested duals. Throws ZeroVector, DimensionMismatch,
/// SingularTensor (Cholesky pivot <= 1e-12 trace).
FundamentalTensor fundamental_tensor(const MinkowskiNorm& norm, const Vec& y);

/// (1/4) D^3(F^2) at y by nested duals. Throws ZeroVector, DimensionMismatch.
CartanTensor cartan_tensor(const MinkowskiNorm& norm, const Vec& y);

MinkowskiNorm make_randers(const Mat& a, const Vec& b);

/// Closed-form fundamental tensor of a Randers norm (a, b) at y.
Mat randers_fundamental_closed_form(const MinkowskiNorm& norm, const Vec& y);
/// Closed-form Cartan tensor of a Randers norm:
/// 2C(u,v,w) = beta(y) D^3 alpha(u,v,w) + beta(u) D^2 alpha(v,w) + beta(v) D^2 alpha(u,w) + beta(w) D^2 alpha(u,v).
CartanTensor randers_cartan_closed_form(const MinkowskiNorm& norm, const Vec& y);

/// (1/2) D(F^2)(y)[w] = g_y(y, w), exact for any scalar type up to depth 2.
template <class S>
S euler_form(const MinkowskiNorm& norm, std::span<const S> y, std::span<const S> w);

// ---------------------------------------------------------------------------

template <class S>
S MinkowskiNorm::quadratic(std::span<const S> y) const {
  S q(0.0);
  for (int i = 0; i < dim_; ++i) {
    S row(0.0);
    for (int j = 0; j < dim_; ++j) {
      if (a_(i, j) != 0.0) row += y[j] * a_(i, j);
    }
    q += y[i] * row;
  }
  return q;
}

template <class S>
S MinkowskiNorm::linear(std::span<const S> y) const {
  S l(0.0);
  for (int i = 0; i < dim_; ++i) {
    if (b_[i] != 0.0) l += y[i] * b_[i];
  }
  return l;
}

template <class S>
S MinkowskiNorm::custom_value(std::span<const S> y) const {
  std::vector<D3> lifted(y.size());
  for (size_t i = 0; i < y.size(); ++i) lifted[i] = lift<D3>(y[i]);
  return lower<S>((*custom_)(std::span<const D3>(lifted)));
}

template <class S>
S MinkowskiNorm::squared(std::span<const S> y) const {
  switch (kind_) {
    case Kind::Euclidean:
      return quadratic(y);
    case Kind::Randers: {
      using std::sqrt;
      S f = sqrt(quadratic(y)) + linear(y);
      return f * f;
    }
    case Kind::Custom:
    default: {
      S f = custom_value(y);
      return f * f;
    }
  }
}

template <class S>
S MinkowskiNorm::value(std::span<const S> y) const {
  using std::sqrt;
  switch (kind_) {
    case Kind::Euclidean:
      return sqrt(quadratic(y));
    case Kind::Randers:
      return sqrt(quadratic(y)) + linear(y);
    case Kind::Custom:
    default:
      return custom_value(y);
  }
}

template <class S>
S euler_form(const MinkowskiNorm& norm, std::span<const S> y, std::span<const S> w) {
  std::vector<Dual<S>> seeded(y.size());
  for (size_t i = 0; i < y.size(); ++i) seeded[i] = Dual<S>(y[i], w[i]);
  Dual<S> f2 = norm.squared(std::span<const Dual<S>>(seeded));
  return f2.d * 0.5;
}

}  // namespace finslergeo
