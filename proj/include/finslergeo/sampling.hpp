#pragma once

#include "finslergeo/linalg.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace finslergeo {

/// Uniformly distributed point on S^{dim-1} (normalized Gaussian).
Vec random_unit_vector(int dim, std::mt19937_64& rng);
/// Standard Gaussian vector.
Vec random_gaussian_vector(int dim, std::mt19937_64& rng);

/// Deterministic, well-spread points on S^{dim-1}: uniform angles for
/// dim 2, a Fibonacci lattice for dim 3, normalized Halton points otherwise.
std::vector<Vec> low_discrepancy_sphere(int dim, int count);

/// Worker count: FINSLERGEO_THREADS if set and positive, else hardware concurrency.
int worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Each
/// index is processed exactly once; callers write results into per-index slots.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace finslergeo
