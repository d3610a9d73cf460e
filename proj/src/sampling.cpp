#include "finslergeo/sampling.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace finslergeo {

Vec random_gaussian_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = normal(rng);
  return v;
}

Vec random_unit_vector(int dim, std::mt19937_64& rng) {
  for (;;) {
    Vec v = random_gaussian_vector(dim, rng);
    const double n = v.norm();
    if (n > 1e-8) return v / n;
  }
}

namespace {

double radical_inverse(std::uint64_t index, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

}  // namespace

std::vector<Vec> low_discrepancy_sphere(int dim, int count) {
  std::vector<Vec> out;
  out.reserve(count);
  if (dim == 1) {
    for (int k = 0; k < count; ++k) out.push_back(Vec::Constant(1, k % 2 == 0 ? 1.0 : -1.0));
    return out;
  }
  if (dim == 2) {
    for (int k = 0; k < count; ++k) {
      const double phi = 2.0 * std::numbers::pi * (k + 0.5) / count;
      Vec v(2);
      v << std::cos(phi), std::sin(phi);
      out.push_back(v);
    }
    return out;
  }
  if (dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      const double z = 1.0 - (2.0 * k + 1.0) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * k;
      Vec v(3);
      v << r * std::cos(phi), r * std::sin(phi), z;
      out.push_back(v);
    }
    return out;
  }
  std::uint64_t index = 1;
  while (static_cast<int>(out.size()) < count) {
    Vec p(dim);
    for (int i = 0; i < dim; ++i) p[i] = 2.0 * radical_inverse(index, kPrimes[i % 16]) - 1.0;
    ++index;
    const double n = p.norm();
    if (n > 1e-3 && n <= 1.0) out.push_back(p / n);
  }
  return out;
}

int worker_count() {
  if (const char* env = std::getenv("FINSLERGEO_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int count, const std::function<void(int)>& body) {
  const int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) threads.emplace_back(run);
  run();
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace finslergeo
