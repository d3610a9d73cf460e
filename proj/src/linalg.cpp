#include "finslergeo/linalg.hpp"

#include "finslergeo/errors.hpp"

#include <cmath>
#include <limits>

namespace finslergeo {

CholeskyCheck cholesky_check(const Mat& m) {
  CholeskyCheck out;
  const Eigen::Index n = m.rows();
  if (n == 0 || m.cols() != n) return out;
  const double tol = 1e-12 * std::abs(m.trace());
  Mat l = Mat::Zero(n, n);
  out.min_pivot = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = m(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    out.min_pivot = std::min(out.min_pivot, pivot);
    if (!(pivot > tol)) {
      out.failed_at = static_cast<int>(j);
      return out;
    }
    l(j, j) = std::sqrt(pivot);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  out.positive_definite = true;
  return out;
}

void require_dim(const Vec& v, int n, const char* what) {
  if (v.size() != n) {
    throw DimensionMismatch(std::string(what) + ": expected length " + std::to_string(n) + ", got " +
                            std::to_string(v.size()));
  }
}

double asymmetry(const Mat& m) { return (m - m.transpose()).cwiseAbs().maxCoeff(); }

}  // namespace finslergeo
