#include "finslergeo/sphere_quadrature.hpp"

#include "finslergeo/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace finslergeo {

std::vector<std::pair<double, double>> gauss_legendre(int n) {
  std::vector<std::pair<double, double>> out(n);
  for (int i = 0; i < n; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 0 ? 1.0 : (n == 1 ? x : p1);
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    out[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
  }
  return out;
}

namespace {

void append_s2(SphereRule& rule, int res, double radial, double lead, double base_weight, bool lead_coord) {
  const auto gl = gauss_legendre(res);
  const int nphi = 2 * res;
  const double dphi = 2.0 * std::numbers::pi / nphi;
  for (const auto& [z, wz] : gl) {
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int k = 0; k < nphi; ++k) {
      const double phi = dphi * k;
      Vec v(lead_coord ? 4 : 3);
      int o = 0;
      if (lead_coord) v[o++] = lead;
      v[o++] = radial * z;
      v[o++] = radial * r * std::cos(phi);
      v[o++] = radial * r * std::sin(phi);
      rule.nodes.push_back(std::move(v));
      rule.weights.push_back(base_weight * wz * dphi);
    }
  }
}

}  // namespace

SphereRule make_sphere_rule(int dim, int resolution) {
  if (resolution < 1) throw ValidationError("sphere rule resolution must be positive");
  SphereRule rule;
  rule.dim = dim;
  rule.resolution = resolution;
  switch (dim) {
    case 2: {
      const double dphi = 2.0 * std::numbers::pi / resolution;
      for (int k = 0; k < resolution; ++k) {
        Vec v(2);
        v << std::cos(dphi * k), std::sin(dphi * k);
        rule.nodes.push_back(v);
        rule.weights.push_back(dphi);
      }
      break;
    }
    case 3:
      append_s2(rule, resolution, 1.0, 0.0, 1.0, false);
      break;
    case 4: {
      // Integral over psi of f sin^2(psi) dpsi = integral of f(u) sqrt(1-u^2) du, u = cos(psi).
      for (int i = 1; i <= resolution; ++i) {
        const double angle = std::numbers::pi * i / (resolution + 1);
        const double u = std::cos(angle);
        const double w = std::numbers::pi / (resolution + 1) * std::sin(angle) * std::sin(angle);
        const double radial = std::sqrt(std::max(0.0, 1.0 - u * u));
        append_s2(rule, resolution, radial, u, w, true);
      }
      break;
    }
    default:
      throw DimensionMismatch("sphere quadrature supports dimensions 2, 3 and 4, got " + std::to_string(dim));
  }
  return rule;
}

int resolution_for_nodes(int dim, int min_nodes) {
  switch (dim) {
    case 2:
      return std::max(1, min_nodes);
    case 3: {
      int r = 1;
      while (2 * r * r < min_nodes) ++r;
      return r;
    }
    case 4: {
      int r = 1;
      while (2 * r * r * r < min_nodes) ++r;
      return r;
    }
    default:
      throw DimensionMismatch("sphere quadrature supports dimensions 2, 3 and 4, got " + std::to_string(dim));
  }
}

std::shared_ptr<const SphereRule> cached_sphere_rule(int dim, int resolution) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const SphereRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{dim, resolution}];
  if (!slot) slot = std::make_shared<const SphereRule>(make_sphere_rule(dim, resolution));
  return slot;
}

double unit_ball_volume(int dim) {
  return std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

}  // namespace finslergeo
