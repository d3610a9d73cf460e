#include "finslergeo/minkowski_norm.hpp"

#include "finslergeo/errors.hpp"

#include <cmath>
#include <sstream>

namespace finslergeo {

namespace {

void require_spd(const Mat& a, const char* what) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw DimensionMismatch(std::string(what) + ": matrix must be square and non-empty");
  }
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if (asymmetry(a) > 1e-12 * scale) throw NotPositiveDefinite(std::string(what) + ": matrix is not symmetric");
  CholeskyCheck chk = cholesky_check(a);
  if (!chk.positive_definite) {
    std::ostringstream os;
    os << what << ": matrix is not positive definite (pivot " << chk.min_pivot << " at row " << chk.failed_at << ")";
    throw NotPositiveDefinite(os.str());
  }
}

void require_nonzero(const Vec& y, const char* what) {
  if (y.size() > 0 && y.cwiseAbs().maxCoeff() == 0.0) {
    throw ZeroVector(std::string(what) + ": y must be nonzero");
  }
}

}  // namespace

MinkowskiNorm MinkowskiNorm::euclidean(const Mat& a) {
  require_spd(a, "euclidean norm");
  MinkowskiNorm n;
  n.kind_ = Kind::Euclidean;
  n.dim_ = static_cast<int>(a.rows());
  n.label_ = "euclidean";
  n.a_ = 0.5 * (a + a.transpose());
  n.b_ = Vec::Zero(n.dim_);
  n.b_sharp_ = Vec::Zero(n.dim_);
  return n;
}

MinkowskiNorm MinkowskiNorm::randers(const Mat& a, const Vec& b) {
  require_spd(a, "randers norm");
  if (b.size() != a.rows()) {
    throw DimensionMismatch("randers norm: b has length " + std::to_string(b.size()) + " but a is " +
                            std::to_string(a.rows()) + "x" + std::to_string(a.rows()));
  }
  MinkowskiNorm n;
  n.kind_ = Kind::Randers;
  n.dim_ = static_cast<int>(a.rows());
  n.label_ = "randers";
  n.a_ = 0.5 * (a + a.transpose());
  n.b_ = b;
  n.b_sharp_ = n.a_.llt().solve(b);
  n.b_norm_ = std::sqrt(std::max(0.0, b.dot(n.b_sharp_)));
  if (!(n.b_norm_ < 1.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "randers norm requires ||b|| < 1, got ||b||_a = " << n.b_norm_;
    throw NonConvexNorm(os.str());
  }
  return n;
}

MinkowskiNorm MinkowskiNorm::custom(int dim, CustomNormFn fn, std::string label) {
  if (dim <= 0) throw DimensionMismatch("custom norm: dimension must be positive");
  MinkowskiNorm n;
  n.kind_ = Kind::Custom;
  n.dim_ = dim;
  n.label_ = std::move(label);
  n.a_ = Mat::Zero(dim, dim);
  n.b_ = Vec::Zero(dim);
  n.b_sharp_ = Vec::Zero(dim);
  n.custom_ = std::make_shared<const CustomNormFn>(std::move(fn));
  return n;
}

bool MinkowskiNorm::is_riemannian() const {
  return kind_ == Kind::Euclidean || (kind_ == Kind::Randers && b_norm_ == 0.0);
}

double MinkowskiNorm::operator()(const Vec& y) const {
  require_dim(y, dim_, "norm argument");
  if (y.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  return value(std::span<const double>(y.data(), static_cast<size_t>(y.size())));
}

double eval_norm(const MinkowskiNorm& norm, const Vec& y) { return norm(y); }

double CartanTensor::contract(const Vec& u, const Vec& v, const Vec& w) const {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double uv = u[i] * v[j];
      if (uv == 0.0) continue;
      for (int k = 0; k < n; ++k) s += (*this)(i, j, k) * uv * w[k];
    }
  }
  return s;
}

double CartanTensor::max_abs() const {
  double m = 0.0;
  for (double e : entries) m = std::max(m, std::abs(e));
  return m;
}

FundamentalTensor fundamental_tensor(const MinkowskiNorm& norm, const Vec& y) {
  const int n = norm.dim();
  require_dim(y, n, "fundamental_tensor");
  require_nonzero(y, "fundamental_tensor");
  FundamentalTensor out{y, Mat::Zero(n, n)};
  std::vector<D2> seeded(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        seeded[k] = D2(D1(y[k], k == i ? 1.0 : 0.0), D1(k == j ? 1.0 : 0.0, 0.0));
      }
      const double h = 0.5 * norm.squared(std::span<const D2>(seeded)).d.d;
      out.matrix(i, j) = h;
      out.matrix(j, i) = h;
    }
  }
  CholeskyCheck chk = cholesky_check(out.matrix);
  if (!chk.positive_definite) {
    std::ostringstream os;
    os << "fundamental tensor is not positive definite (pivot " << chk.min_pivot << " at row " << chk.failed_at
       << ")";
    throw SingularTensor(os.str());
  }
  return out;
}

CartanTensor cartan_tensor(const MinkowskiNorm& norm, const Vec& y) {
  const int n = norm.dim();
  require_dim(y, n, "cartan_tensor");
  require_nonzero(y, "cartan_tensor");
  CartanTensor out{y, n, std::vector<double>(static_cast<size_t>(n) * n * n, 0.0)};
  std::vector<D3> seeded(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int l = j; l < n; ++l) {
        for (int k = 0; k < n; ++k) {
          seeded[k] = D3(D2(D1(y[k], k == i ? 1.0 : 0.0), D1(k == j ? 1.0 : 0.0, 0.0)),
                         D2(D1(k == l ? 1.0 : 0.0, 0.0), D1(0.0, 0.0)));
        }
        const double c = 0.25 * norm.squared(std::span<const D3>(seeded)).d.d.d;
        out.at(i, j, l) = c;
        out.at(i, l, j) = c;
        out.at(j, i, l) = c;
        out.at(j, l, i) = c;
        out.at(l, i, j) = c;
        out.at(l, j, i) = c;
      }
    }
  }
  return out;
}

MinkowskiNorm make_randers(const Mat& a, const Vec& b) { return MinkowskiNorm::randers(a, b); }

Mat randers_fundamental_closed_form(const MinkowskiNorm& norm, const Vec& y) {
  require_dim(y, norm.dim(), "randers_fundamental_closed_form");
  require_nonzero(y, "randers_fundamental_closed_form");
  const Mat& a = norm.a();
  const Vec& b = norm.b();  // b_i = a(X, e_i) with X = b_sharp
  const Vec ay = a * y;
  const double alpha2 = y.dot(ay);
  const double alpha = std::sqrt(alpha2);
  const double beta = b.dot(y);
  // a(u,v) + a(X,u)a(X,v) + a(u,v)a(X,y)/alpha - a(v,y)a(u,y)a(X,y)/alpha^3
  //   + a(X,v)a(u,y)/alpha + a(X,u)a(v,y)/alpha
  Mat g = a + b * b.transpose();
  g += (beta / alpha) * a;
  g -= (beta / (alpha2 * alpha)) * (ay * ay.transpose());
  g += (ay * b.transpose() + b * ay.transpose()) / alpha;
  return g;
}

CartanTensor randers_cartan_closed_form(const MinkowskiNorm& norm, const Vec& y) {
  const int n = norm.dim();
  require_dim(y, n, "randers_cartan_closed_form");
  require_nonzero(y, "randers_cartan_closed_form");
  const Mat& a = norm.a();
  const Vec& b = norm.b();
  const Vec ay = a * y;
  const double alpha2 = y.dot(ay);
  const double alpha = std::sqrt(alpha2);
  const double alpha3 = alpha2 * alpha;
  const double alpha5 = alpha3 * alpha2;
  const double beta = b.dot(y);
  const Mat hess_alpha = a / alpha - (ay * ay.transpose()) / alpha3;
  CartanTensor out{y, n, std::vector<double>(static_cast<size_t>(n) * n * n, 0.0)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double third_alpha =
            -(a(i, j) * ay[k] + a(i, k) * ay[j] + a(j, k) * ay[i]) / alpha3 + 3.0 * ay[i] * ay[j] * ay[k] / alpha5;
        out.at(i, j, k) =
            0.5 * (beta * third_alpha + b[i] * hess_alpha(j, k) + b[j] * hess_alpha(i, k) + b[k] * hess_alpha(i, j));
      }
    }
  }
  return out;
}

}  // namespace finslergeo
