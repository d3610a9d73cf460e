#pragma once

#include "finslergeo/linalg.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace finslergeo {

/// Deterministic product rule on S^{dim-1}, dim in {2, 3, 4}.
///   dim 2: `resolution` equally spaced angles (periodic trapezoid).
///   dim 3: `resolution` Gauss-Legendre nodes in cos(theta) x 2*resolution angles.
///   dim 4: `resolution` Gauss-Chebyshev (2nd kind) nodes in cos(psi) x the dim-3 rule.
struct SphereRule {
  int dim = 0;
  int resolution = 0;
  std::vector<Vec> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
std::vector<std::pair<double, double>> gauss_legendre(int n);

SphereRule make_sphere_rule(int dim, int resolution);
/// Smallest resolution whose node count is >= min_nodes.
int resolution_for_nodes(int dim, int min_nodes);
/// Memoized rule, safe to share across threads.
std::shared_ptr<const SphereRule> cached_sphere_rule(int dim, int resolution);

/// Euclidean volume of the unit ball in R^dim.
double unit_ball_volume(int dim);

}  // namespace finslergeo
