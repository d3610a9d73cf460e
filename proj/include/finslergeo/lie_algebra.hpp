#pragma once

#include "finslergeo/linalg.hpp"

#include <span>
#include <string>
#include <vector>

namespace finslergeo {

/// One structure-constant entry c^k_ij, 0-based indices.
struct BracketEntry {
  int i = 0;
  int j = 0;
  int k = 0;
  double c = 0.0;

  bool operator==(const BracketEntry&) const = default;
};

/// A finite-dimensional real Lie algebra given by structure constants on a
/// fixed basis: [e_i, e_j] = sum_k c^k_ij e_k.
class LieAlgebra {
 public:
  /// Takes the full tensor as given, indexed c[(k * n + i) * n + j]. Nothing
  /// is symmetrized; validate() reports antisymmetry and Jacobi failures.
  LieAlgebra(int dim, std::vector<double> constants, std::vector<std::string> basis_names = {});

  /// Builds from sparse entries, filling c^k_ji = -c^k_ij. Throws
  /// ValidationError on an entry that contradicts an earlier one and
  /// DimensionMismatch on an out-of-range index.
  static LieAlgebra from_entries(int dim, std::span<const BracketEntry> entries,
                                 std::vector<std::string> basis_names = {});

  int dim() const { return dim_; }
  const std::vector<std::string>& basis_names() const { return names_; }
  double c(int k, int i, int j) const { return c_[(static_cast<size_t>(k) * dim_ + i) * dim_ + j]; }
  /// Nonzero entries with i < j, in (i, j, k) order.
  std::vector<BracketEntry> entries() const;
  bool is_abelian() const;

  /// [x, y] over any scalar type (duals included).
  template <class S>
  void bracket_into(std::span<const S> x, std::span<const S> y, std::span<S> out) const;

  /// Matrix of ad(x) = [x, .].
  Mat ad(const Vec& x) const;

  /// sum over cyclic (i,j,k) of sum_m c^m_ij c^l_mk.
  double jacobiator(int i, int j, int k, int l) const;

 private:
  int dim_;
  std::vector<double> c_;
  std::vector<std::string> names_;
};

/// g = m (+) h, given by complementary basis index sets.
class ReductiveDecomposition {
 public:
  /// Throws DimensionMismatch for out-of-range indices; overlap and coverage
  /// failures are left to validate().
  ReductiveDecomposition(LieAlgebra algebra, std::vector<int> m_indices, std::vector<int> h_indices);
  /// m = g, h = 0.
  explicit ReductiveDecomposition(LieAlgebra algebra);

  const LieAlgebra& algebra() const { return algebra_; }
  const std::vector<int>& m_indices() const { return m_; }
  const std::vector<int>& h_indices() const { return h_; }
  int dim() const { return algebra_.dim(); }
  int m_dim() const { return static_cast<int>(m_.size()); }
  bool trivial_isotropy() const { return h_.empty(); }

  /// Zeroes the h components.
  template <class S>
  void project_into(std::span<S> x) const;
  /// Full vector (length dim) from m-coordinates.
  Vec embed_m(const Vec& m_coords) const;
  /// m-coordinates (length m_dim) of a full vector.
  Vec m_coords(const Vec& x) const;

 private:
  LieAlgebra algebra_;
  std::vector<int> m_;
  std::vector<int> h_;
  std::vector<char> in_h_;
};

Vec bracket(const LieAlgebra& alg, const Vec& x, const Vec& y);
Vec project_m(const ReductiveDecomposition& dec, const Vec& x);

struct InvariantCheck {
  std::string name;
  bool passed = true;
  double max_violation = 0.0;
  std::string witness;  // located offender, 1-based indices
};

struct ValidationReport {
  bool passed = true;
  std::vector<InvariantCheck> checks;
};

/// Checks partition, antisymmetry, Jacobi, [h,m] in m and [h,h] in h.
ValidationReport validate(const ReductiveDecomposition& dec, double tol = 1e-12);

/// exp(t ad(x)). Nilpotent ad(x) uses the terminating series; otherwise
/// scaling and squaring with a Pade core.
Mat ad_exp(const LieAlgebra& alg, const Vec& x, double t);

namespace algebras {
/// [e1, e2] = e3.
LieAlgebra heisenberg3();
/// [e1, e2] = e3, [e2, e3] = e1, [e3, e1] = e2.
LieAlgebra su2();
LieAlgebra abelian(int dim);
LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b);
}  // namespace algebras

// ---------------------------------------------------------------------------

template <class S>
void LieAlgebra::bracket_into(std::span<const S> x, std::span<const S> y, std::span<S> out) const {
  for (int k = 0; k < dim_; ++k) out[k] = S(0.0);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      const S xy = x[i] * y[j];
      for (int k = 0; k < dim_; ++k) {
        const double c = this->c(k, i, j);
        if (c != 0.0) out[k] += xy * c;
      }
    }
  }
}

template <class S>
void ReductiveDecomposition::project_into(std::span<S> x) const {
  for (int i : h_) x[i] = S(0.0);
}

}  // namespace finslergeo
