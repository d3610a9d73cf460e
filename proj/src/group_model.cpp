#include "finslergeo/group_model.hpp"

#include "finslergeo/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace finslergeo {

Mat GroupModel::dleft_matrix(const Vec& p, const Vec& q) const {
  const int n = dim();
  const double h = 1e-5;
  Mat jac(n, n);
  for (int j = 0; j < n; ++j) {
    Vec e = Vec::Zero(n);
    e[j] = h;
    const Vec col = (-multiply(p, q + 2.0 * e) + 8.0 * multiply(p, q + e) - 8.0 * multiply(p, q - e) +
                     multiply(p, q - 2.0 * e)) /
                    (12.0 * h);
    jac.col(j) = col;
  }
  return jac;
}

void GroupModel::check_domain(const Vec& x) const {
  require_dim(x, dim(), "chart point");
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) throw ChartDomain(name() + ": non-finite chart coordinate");
  }
}

// --- Heisenberg ------------------------------------------------------------

Vec Heisenberg3::multiply(const Vec& p, const Vec& q) const {
  require_dim(p, 3, "heisenberg3 multiply p");
  require_dim(q, 3, "heisenberg3 multiply q");
  Vec r(3);
  r << p[0] + q[0], p[1] + q[1], p[2] + q[2] + 0.5 * (p[0] * q[1] - q[0] * p[1]);
  return r;
}

Vec Heisenberg3::inverse(const Vec& p) const {
  require_dim(p, 3, "heisenberg3 inverse");
  return -p;
}

Vec Heisenberg3::exp_map(const Vec& x, double t) const {
  require_dim(x, 3, "heisenberg3 exp");
  return t * x;
}

Mat Heisenberg3::dleft_matrix(const Vec& p, const Vec& q) const {
  require_dim(p, 3, "heisenberg3 dleft p");
  require_dim(q, 3, "heisenberg3 dleft q");
  Mat m = Mat::Identity(3, 3);
  m(2, 0) = -0.5 * p[1];
  m(2, 1) = 0.5 * p[0];
  return m;
}

Mat Heisenberg3::left_trivialization(const Vec& x) const {
  require_dim(x, 3, "heisenberg3 trivialization");
  Mat m = Mat::Identity(3, 3);
  m(2, 0) = 0.5 * x[1];
  m(2, 1) = -0.5 * x[0];
  return m;
}

// --- SU(2) -----------------------------------------------------------------

Quaternion Quaternion::operator*(const Quaternion& o) const {
  return {w * o.w - x * o.x - y * o.y - z * o.z, w * o.x + x * o.w + y * o.z - z * o.y,
          w * o.y - x * o.z + y * o.w + z * o.x, w * o.z + x * o.y - y * o.x + z * o.w};
}

double Quaternion::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Quaternion Quaternion::normalized() const {
  const double n = norm();
  return {w / n, x / n, y / n, z / n};
}

Quaternion SU2::to_quaternion(const Vec& v) {
  require_dim(v, 3, "su2 chart point");
  const double theta = v.norm();
  const double half = 0.5 * theta;
  // sin(theta/2) / theta
  const double s = theta < 1e-4 ? 0.5 - theta * theta / 48.0 : std::sin(half) / theta;
  return {std::cos(half), s * v[0], s * v[1], s * v[2]};
}

Vec SU2::from_quaternion(const Quaternion& q_in) {
  const Quaternion q = q_in.normalized();
  const double s = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
  Vec out(3);
  if (s == 0.0) {
    if (q.w < 0.0) throw ChartDomain("su2: -1 lies on the cut locus of the exponential chart");
    out.setZero();
    return out;
  }
  const double angle = 2.0 * std::atan2(s, q.w);
  const double scale = angle / s;
  out << scale * q.x, scale * q.y, scale * q.z;
  return out;
}

Vec SU2::multiply(const Vec& p, const Vec& q) const {
  return from_quaternion((to_quaternion(p) * to_quaternion(q)).normalized());
}

Vec SU2::inverse(const Vec& p) const {
  require_dim(p, 3, "su2 inverse");
  return -p;
}

Vec SU2::exp_map(const Vec& x, double t) const {
  require_dim(x, 3, "su2 exp");
  return t * x;
}

Mat SU2::left_trivialization(const Vec& x) const {
  require_dim(x, 3, "su2 trivialization");
  const double theta = x.norm();
  const double t2 = theta * theta;
  double c1;  // (1 - cos theta) / theta^2
  double c2;  // (theta - sin theta) / theta^3
  if (theta < 1e-4) {
    c1 = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
    c2 = 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
  } else {
    c1 = (1.0 - std::cos(theta)) / t2;
    c2 = (theta - std::sin(theta)) / (t2 * theta);
  }
  Mat ad(3, 3);
  ad << 0.0, -x[2], x[1], x[2], 0.0, -x[0], -x[1], x[0], 0.0;
  return Mat::Identity(3, 3) - c1 * ad + c2 * ad * ad;
}

Mat SU2::dleft_matrix(const Vec& p, const Vec& q) const {
  const Vec r = multiply(p, q);
  return left_trivialization(r).partialPivLu().solve(left_trivialization(q));
}

void SU2::check_domain(const Vec& x) const {
  GroupModel::check_domain(x);
  const double r = x.norm();
  if (r >= kChartRadius) {
    std::ostringstream os;
    os << "su2: chart coordinate radius " << r << " exceeds " << kChartRadius;
    throw ChartDomain(os.str());
  }
}

// ---------------------------------------------------------------------------

std::shared_ptr<const GroupModel> make_group_model(const std::string& name) {
  if (name == "heisenberg3") return std::make_shared<Heisenberg3>();
  if (name == "su2") return std::make_shared<SU2>();
  if (name.rfind("abelian", 0) == 0 && name.size() > 7) {
    std::string digits = name.substr(7);
    if (digits.size() > 2 && digits.front() == '<' && digits.back() == '>') digits = digits.substr(1, digits.size() - 2);
    if (digits.find_first_not_of("0123456789") == std::string::npos) {
      const int n = std::stoi(digits);
      if (n >= 1 && n <= 16) return std::make_shared<Abelian>(n);
    }
  }
  throw ValidationError("unknown group model \"" + name + "\" (expected heisenberg3, su2 or abelian<n>)");
}

std::vector<OrbitPoint> orbit_curve(const GroupModel& model, const Vec& x, const Vec& p, std::span<const double> ts) {
  require_dim(x, model.dim(), "orbit_curve X");
  require_dim(p, model.dim(), "orbit_curve p");
  if (x.cwiseAbs().maxCoeff() == 0.0) throw DegenerateVector("orbit_curve: X must be nonzero");
  std::vector<OrbitPoint> out;
  out.reserve(ts.size());
  const Vec e = model.identity();
  for (double t : ts) {
    OrbitPoint pt;
    pt.t = t;
    pt.point = model.multiply(p, model.exp_map(x, t));
    model.check_domain(pt.point);
    pt.velocity = model.dleft(pt.point, e, x);
    out.push_back(std::move(pt));
  }
  return out;
}

ChartMetric::ChartMetric(std::shared_ptr<const GroupModel> model, MinkowskiNorm norm)
    : model_(std::move(model)), norm_(std::move(norm)) {
  if (!model_) throw ValidationError("ChartMetric needs a group model");
  if (norm_.dim() != model_->dim()) {
    throw DimensionMismatch("norm dimension " + std::to_string(norm_.dim()) + " does not match model " +
                            model_->name() + " of dimension " + std::to_string(model_->dim()));
  }
}

double ChartMetric::F(const Vec& x, const Vec& y) const {
  require_dim(x, dim(), "chart point");
  require_dim(y, dim(), "chart tangent");
  return norm_(model_->left_trivialization(x) * y);
}

ChartMetric induced_chart_metric(std::shared_ptr<const GroupModel> model, const MinkowskiNorm& norm) {
  return ChartMetric(std::move(model), norm);
}

}  // namespace finslergeo
