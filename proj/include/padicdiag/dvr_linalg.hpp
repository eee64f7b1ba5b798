#pragma once

// Dense linear algebra over L, o_L and o_L/p^n, plus o_L-lattices in L^d.
//
// Elimination always pivots on an entry of minimal valuation, so every
// multiplier is integral and the valuations of the working matrix never
// drop below those of the input. A zero produced by cancellation is only
// trusted when its absolute precision clears the matrix's minimal valuation
// by half the working precision; otherwise PrecisionError is raised.

#include <cstddef>
#include <optional>
#include <vector>

#include "padicdiag/local_field.hpp"

namespace padicdiag {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, const T& zero)
      : rows_(rows), cols_(cols), zero_(zero), data_(rows * cols, zero) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  const T& zero() const { return zero_; }
  T& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

  Matrix operator*(const Matrix& b) const;
  Matrix operator+(const Matrix& b) const;
  Matrix operator-(const Matrix& b) const;
  Matrix scaled(const T& s) const;
  Matrix transpose() const;
  Matrix block(size_t r0, size_t c0, size_t nr, size_t nc) const;
  Matrix column(size_t j) const { return block(0, j, rows_, 1); }
  Matrix hstack(const Matrix& b) const;
  Matrix vstack(const Matrix& b) const;
  Matrix kron(const Matrix& b) const;
  void set_block(size_t r0, size_t c0, const Matrix& b);
  void swap_rows(size_t a, size_t b);
  void swap_cols(size_t a, size_t b);
  bool is_zero() const;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  T zero_{};
  std::vector<T> data_;
};

using ExactMatrix = Matrix<FieldElement>;
using ResidueMatrix = Matrix<Residue>;

ExactMatrix zero_matrix(const FieldContext& ctx, size_t rows, size_t cols);
ExactMatrix identity_matrix(const FieldContext& ctx, size_t n);
ExactMatrix matrix_from_ints(const FieldContext& ctx, size_t rows, size_t cols,
                             const std::vector<int64_t>& entries);
ResidueMatrix reduce_matrix(const ExactMatrix& a, int n);
/// Equality of every entry at working precision.
bool matrices_equal(const ExactMatrix& a, const ExactMatrix& b);
/// Smallest valuation lower bound among nonzero entries (kInfiniteOrd if none).
int64_t min_ord(const ExactMatrix& a);
/// True iff every entry is congruent to zero modulo pi^b.
bool divisible_by(const ExactMatrix& a, int64_t b);

struct RowEchelon {
  ExactMatrix form;            // upper echelon, pivots not normalised
  std::vector<size_t> pivots;  // pivot column of each nonzero row
};

RowEchelon row_echelon(const ExactMatrix& a);
size_t rank(const ExactMatrix& a);
/// Columns form a basis of {v : a v = 0} over L.
ExactMatrix kernel(const ExactMatrix& a);
/// Some X with a X = b, or nullopt when inconsistent.
std::optional<ExactMatrix> solve(const ExactMatrix& a, const ExactMatrix& b);
ExactMatrix inverse(const ExactMatrix& a);
/// Basis (columns) of the common fixed space of the given square matrices.
ExactMatrix fixed_space(const std::vector<ExactMatrix>& gens);

/// Valuation exponents of Smith invariants; kInfiniteOrd marks a zero
/// invariant over o_L, and n marks one over o_L/p^n.
template <class T>
struct SmithForm {
  Matrix<T> U, D, V;  // U A V = D
  std::vector<int64_t> invariants;
};

SmithForm<FieldElement> smith_normal_form(const ExactMatrix& a, bool with_transforms = true);
SmithForm<Residue> smith_normal_form(const ResidueMatrix& a, bool with_transforms = true);

/// o_L-basis (columns) of span_L(k) intersected with o_L^d.
ExactMatrix saturate(const ExactMatrix& k);
/// Basis (columns) of {y : c y in o_L^n} for c of full column rank.
ExactMatrix preimage_lattice(const ExactMatrix& c);

class Lattice {
 public:
  Lattice() = default;
  /// Lattice spanned over o_L by the columns of gens.
  static Lattice from_generators(const ExactMatrix& gens);
  static Lattice standard(const FieldContext& ctx, size_t dim);

  const ExactMatrix& basis() const { return basis_; }
  size_t ambient_dim() const { return basis_.rows(); }
  size_t rank() const { return basis_.cols(); }
  const FieldContext& context() const { return *ctx_; }
  /// Coordinates of vectors in the basis, or nullopt if outside the L-span.
  std::optional<ExactMatrix> coordinates(const ExactMatrix& vectors) const;
  bool contains(const ExactMatrix& vectors) const;
  Lattice image(const ExactMatrix& g) const;
  Lattice scaled(const FieldElement& s) const;

 private:
  const FieldContext* ctx_ = nullptr;
  ExactMatrix basis_;
};

Lattice lattice_sum(const Lattice& a, const Lattice& b);
Lattice lattice_intersect(const Lattice& a, const Lattice& b);

enum class Containment { Equal, FirstInSecond, SecondInFirst, Incomparable };

struct LatticeComparison {
  Containment relation = Containment::Incomparable;
  std::vector<int64_t> index;  // Smith exponents of the inclusion when contained
};

LatticeComparison lattice_compare(const Lattice& a, const Lattice& b);
const char* containment_name(Containment c);

/// Matrix of phi_x: v1 + v2 -> x v1 + v2 for the splitting U1 (+) U2 (bases as columns).
ExactMatrix phi_x_matrix(const FieldElement& x, const ExactMatrix& u1, const ExactMatrix& u2);
ExactMatrix apply_phi_x(const ExactMatrix& v, const FieldElement& x, const ExactMatrix& u1,
                        const ExactMatrix& u2);
Lattice apply_phi_x(const Lattice& m, const FieldElement& x, const ExactMatrix& u1,
                    const ExactMatrix& u2);
/// Smallest a >= 1 with p^{-a}(M cap U1) + U2 containing M.
int deformation_bound(const Lattice& m, const ExactMatrix& u1, const ExactMatrix& u2);

}  // namespace padicdiag
