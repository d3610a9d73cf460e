#include "finslergeo/lie_algebra.hpp"

#include "finslergeo/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

namespace finslergeo {

namespace {

std::vector<std::string> default_names(int dim, std::vector<std::string> names) {
  if (names.empty()) {
    for (int i = 0; i < dim; ++i) names.push_back("e" + std::to_string(i + 1));
  }
  if (static_cast<int>(names.size()) != dim) {
    throw DimensionMismatch("basis_names has " + std::to_string(names.size()) + " labels for dimension " +
                            std::to_string(dim));
  }
  return names;
}

std::string triple(int i, int j, int k) {
  std::ostringstream os;
  os << "(" << i + 1 << "," << j + 1 << "," << k + 1 << ")";
  return os.str();
}

}  // namespace

LieAlgebra::LieAlgebra(int dim, std::vector<double> constants, std::vector<std::string> basis_names)
    : dim_(dim), c_(std::move(constants)), names_(default_names(dim, std::move(basis_names))) {
  if (dim <= 0) throw DimensionMismatch("Lie algebra dimension must be positive");
  if (c_.size() != static_cast<size_t>(dim) * dim * dim) {
    throw DimensionMismatch("structure constants: expected " + std::to_string(dim * dim * dim) + " entries, got " +
                            std::to_string(c_.size()));
  }
}

LieAlgebra LieAlgebra::from_entries(int dim, std::span<const BracketEntry> entries,
                                    std::vector<std::string> basis_names) {
  if (dim <= 0) throw DimensionMismatch("Lie algebra dimension must be positive");
  const size_t n = static_cast<size_t>(dim);
  std::vector<double> c(n * n * n, 0.0);
  std::vector<char> set(n * n * n, 0);
  auto idx = [n](int k, int i, int j) { return (static_cast<size_t>(k) * n + i) * n + j; };
  for (const BracketEntry& e : entries) {
    for (int v : {e.i, e.j, e.k}) {
      if (v < 0 || v >= dim) {
        throw DimensionMismatch("structure constant index " + std::to_string(v + 1) + " outside 1.." +
                                std::to_string(dim));
      }
    }
    if (e.i == e.j && e.c != 0.0) {
      throw ValidationError("structure constant c^" + std::to_string(e.k + 1) + "_" + std::to_string(e.i + 1) +
                            std::to_string(e.j + 1) + " must vanish (antisymmetry)");
    }
    auto put = [&](size_t at, double value) {
      if (set[at] && c[at] != value) {
        throw ValidationError("contradictory structure constant for " + triple(e.i, e.j, e.k));
      }
      c[at] = value;
      set[at] = 1;
    };
    put(idx(e.k, e.i, e.j), e.c);
    put(idx(e.k, e.j, e.i), -e.c);
  }
  return LieAlgebra(dim, std::move(c), std::move(basis_names));
}

std::vector<BracketEntry> LieAlgebra::entries() const {
  std::vector<BracketEntry> out;
  for (int i = 0; i < dim_; ++i) {
    for (int j = i + 1; j < dim_; ++j) {
      for (int k = 0; k < dim_; ++k) {
        if (c(k, i, j) != 0.0) out.push_back({i, j, k, c(k, i, j)});
      }
    }
  }
  return out;
}

bool LieAlgebra::is_abelian() const {
  for (double v : c_) {
    if (v != 0.0) return false;
  }
  return true;
}

Mat LieAlgebra::ad(const Vec& x) const {
  require_dim(x, dim_, "ad");
  Mat m = Mat::Zero(dim_, dim_);
  for (int k = 0; k < dim_; ++k) {
    for (int j = 0; j < dim_; ++j) {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) s += c(k, i, j) * x[i];
      m(k, j) = s;
    }
  }
  return m;
}

double LieAlgebra::jacobiator(int i, int j, int k, int l) const {
  double s = 0.0;
  for (int m = 0; m < dim_; ++m) {
    s += c(m, i, j) * c(l, m, k) + c(m, j, k) * c(l, m, i) + c(m, k, i) * c(l, m, j);
  }
  return s;
}

ReductiveDecomposition::ReductiveDecomposition(LieAlgebra algebra, std::vector<int> m_indices,
                                               std::vector<int> h_indices)
    : algebra_(std::move(algebra)), m_(std::move(m_indices)), h_(std::move(h_indices)) {
  in_h_.assign(algebra_.dim(), 0);
  for (int v : m_) {
    if (v < 0 || v >= algebra_.dim()) throw DimensionMismatch("m index " + std::to_string(v + 1) + " out of range");
  }
  for (int v : h_) {
    if (v < 0 || v >= algebra_.dim()) throw DimensionMismatch("h index " + std::to_string(v + 1) + " out of range");
    in_h_[v] = 1;
  }
}

ReductiveDecomposition::ReductiveDecomposition(LieAlgebra algebra)
    : ReductiveDecomposition(algebra, {}, {}) {
  for (int i = 0; i < algebra_.dim(); ++i) m_.push_back(i);
}

Vec ReductiveDecomposition::embed_m(const Vec& m_coords) const {
  require_dim(m_coords, m_dim(), "embed_m");
  Vec x = Vec::Zero(dim());
  for (int a = 0; a < m_dim(); ++a) x[m_[a]] = m_coords[a];
  return x;
}

Vec ReductiveDecomposition::m_coords(const Vec& x) const {
  require_dim(x, dim(), "m_coords");
  Vec out(m_dim());
  for (int a = 0; a < m_dim(); ++a) out[a] = x[m_[a]];
  return out;
}

Vec bracket(const LieAlgebra& alg, const Vec& x, const Vec& y) {
  require_dim(x, alg.dim(), "bracket X");
  require_dim(y, alg.dim(), "bracket Y");
  Vec out(alg.dim());
  alg.bracket_into<double>(std::span<const double>(x.data(), x.size()), std::span<const double>(y.data(), y.size()),
                           std::span<double>(out.data(), out.size()));
  return out;
}

Vec project_m(const ReductiveDecomposition& dec, const Vec& x) {
  require_dim(x, dec.dim(), "project_m");
  Vec out = x;
  dec.project_into<double>(std::span<double>(out.data(), out.size()));
  return out;
}

ValidationReport validate(const ReductiveDecomposition& dec, double tol) {
  const LieAlgebra& alg = dec.algebra();
  const int n = alg.dim();
  ValidationReport report;

  InvariantCheck partition;
  partition.name = "partition";
  std::vector<int> count(n, 0);
  for (int v : dec.m_indices()) count[v]++;
  for (int v : dec.h_indices()) count[v]++;
  for (int i = 0; i < n; ++i) {
    if (count[i] != 1) {
      partition.passed = false;
      partition.max_violation = std::max(partition.max_violation, static_cast<double>(std::abs(count[i] - 1)));
      if (partition.witness.empty()) {
        partition.witness = "basis index " + std::to_string(i + 1) + " appears " + std::to_string(count[i]) +
                            " times across m and h";
      }
    }
  }
  report.checks.push_back(partition);

  InvariantCheck antisym;
  antisym.name = "antisymmetry";
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const double v = std::abs(alg.c(k, i, j) + alg.c(k, j, i));
        if (v > antisym.max_violation) {
          antisym.max_violation = v;
          antisym.witness = "c^k_ij + c^k_ji at (i,j,k)=" + triple(i, j, k);
        }
      }
    }
  }
  antisym.passed = antisym.max_violation <= tol;
  if (antisym.passed) antisym.witness.clear();
  report.checks.push_back(antisym);

  InvariantCheck jacobi;
  jacobi.name = "jacobi";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          const double v = std::abs(alg.jacobiator(i, j, k, l));
          if (v > jacobi.max_violation) {
            jacobi.max_violation = v;
            std::ostringstream os;
            os << "(i,j,k,l)=(" << i + 1 << "," << j + 1 << "," << k + 1 << "," << l + 1 << ")";
            jacobi.witness = os.str();
          }
        }
      }
    }
  }
  jacobi.passed = jacobi.max_violation <= tol;
  if (jacobi.passed) jacobi.witness.clear();
  report.checks.push_back(jacobi);

  InvariantCheck hm;
  hm.name = "[h,m] in m";
  for (int i : dec.h_indices()) {
    for (int j : dec.m_indices()) {
      for (int k : dec.h_indices()) {
        const double v = std::abs(alg.c(k, i, j));
        if (v > hm.max_violation) {
          hm.max_violation = v;
          hm.witness = "c^k_ij with i in h, j in m, k in h at (i,j,k)=" + triple(i, j, k);
        }
      }
    }
  }
  hm.passed = hm.max_violation <= tol;
  if (hm.passed) hm.witness.clear();
  report.checks.push_back(hm);

  InvariantCheck hh;
  hh.name = "h subalgebra";
  for (int i : dec.h_indices()) {
    for (int j : dec.h_indices()) {
      for (int k : dec.m_indices()) {
        const double v = std::abs(alg.c(k, i, j));
        if (v > hh.max_violation) {
          hh.max_violation = v;
          hh.witness = "c^k_ij with i,j in h, k in m at (i,j,k)=" + triple(i, j, k);
        }
      }
    }
  }
  hh.passed = hh.max_violation <= tol;
  if (hh.passed) hh.witness.clear();
  report.checks.push_back(hh);

  for (const auto& c : report.checks) report.passed = report.passed && c.passed;
  return report;
}

Mat ad_exp(const LieAlgebra& alg, const Vec& x, double t) {
  const int n = alg.dim();
  const Mat a = t * alg.ad(x);
  // Exact nilpotency test: a^n == 0 means the series stops at a^(n-1).
  Mat power = Mat::Identity(n, n);
  Mat sum = Mat::Identity(n, n);
  bool nilpotent = false;
  double factorial = 1.0;
  for (int k = 1; k <= n; ++k) {
    power = power * a;
    if (power.cwiseAbs().maxCoeff() == 0.0) {
      nilpotent = true;
      break;
    }
    factorial *= k;
    sum += power / factorial;
  }
  if (nilpotent) return sum;
  return a.exp();
}

namespace algebras {

LieAlgebra heisenberg3() {
  const BracketEntry e[] = {{0, 1, 2, 1.0}};
  return LieAlgebra::from_entries(3, e, {"e1", "e2", "e3"});
}

LieAlgebra su2() {
  const BracketEntry e[] = {{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {2, 0, 1, 1.0}};
  return LieAlgebra::from_entries(3, e, {"e1", "e2", "e3"});
}

LieAlgebra abelian(int dim) { return LieAlgebra(dim, std::vector<double>(static_cast<size_t>(dim) * dim * dim, 0.0)); }

LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b) {
  const int n = a.dim() + b.dim();
  std::vector<BracketEntry> entries = a.entries();
  for (BracketEntry e : b.entries()) {
    e.i += a.dim();
    e.j += a.dim();
    e.k += a.dim();
    entries.push_back(e);
  }
  return LieAlgebra::from_entries(n, entries);
}

}  // namespace algebras

}  // namespace finslergeo
