#pragma once

#include <Eigen/Dense>

#include <string>

namespace finslergeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Outcome of a pivoted-tolerance Cholesky attempt.
struct CholeskyCheck {
  bool positive_definite = false;
  double min_pivot = 0.0;  // smallest pivot seen before failure (or overall)
  int failed_at = -1;      // row index of the first rejected pivot
};

/// Plain Cholesky sweep; a pivot is rejected when it is <= 1e-12 * trace(m).
CholeskyCheck cholesky_check(const Mat& m);

/// Throws DimensionMismatch naming `what` when v.size() != n.
void require_dim(const Vec& v, int n, const char* what);

/// Max |m - m^T| entry.
double asymmetry(const Mat& m);

}  // namespace finslergeo
