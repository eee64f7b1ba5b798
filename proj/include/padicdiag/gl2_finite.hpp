#pragma once

// 2x2 matrices over Z/p^n, the congruence subgroups K_m, I_m, I, J_c of
// GL2(Z_p), cosets J_c\K, and exact rational 2x2 matrices for elements of G.

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "padicdiag/errors.hpp"

namespace padicdiag {

class FiniteMatrix {
 public:
  FiniteMatrix() = default;
  FiniteMatrix(uint64_t p, int level, int64_t a, int64_t b, int64_t c, int64_t d);

  static FiniteMatrix identity(uint64_t p, int level) { return {p, level, 1, 0, 0, 1}; }
  static FiniteMatrix weyl(uint64_t p, int level) { return {p, level, 0, 1, 1, 0}; }
  static FiniteMatrix e12(uint64_t p, int level, int64_t x) { return {p, level, 1, x, 0, 1}; }
  static FiniteMatrix e21(uint64_t p, int level, int64_t x) { return {p, level, 1, 0, x, 1}; }
  static FiniteMatrix diag(uint64_t p, int level, int64_t x, int64_t y) { return {p, level, x, 0, 0, y}; }

  uint64_t p() const { return p_; }
  int level() const { return level_; }
  uint64_t modulus() const { return mod_; }
  uint64_t a() const { return e_[0]; }
  uint64_t b() const { return e_[1]; }
  uint64_t c() const { return e_[2]; }
  uint64_t d() const { return e_[3]; }
  uint64_t det() const;
  bool invertible() const { return det() % p_ != 0; }
  FiniteMatrix inverse() const;
  /// Image at a lower level.
  FiniteMatrix reduced(int level) const;

  friend FiniteMatrix operator*(const FiniteMatrix& x, const FiniteMatrix& y);
  friend bool operator==(const FiniteMatrix& x, const FiniteMatrix& y);
  friend bool operator<(const FiniteMatrix& x, const FiniteMatrix& y);
  std::string to_string() const;

 private:
  uint64_t p_ = 3;
  int level_ = 1;
  uint64_t mod_ = 3;
  uint64_t e_[4] = {1, 0, 0, 1};
};

uint64_t power_of(uint64_t p, int k);
/// Generator of (Z/p^k)^x for every k (a primitive root mod p^2).
uint64_t primitive_root(uint64_t p);
uint64_t inverse_mod(uint64_t a, uint64_t m);

enum class Subgroup { K, Km, Im, I, Jc };
const char* subgroup_name(Subgroup s);

/// Congruence conditions of the subgroup with parameter m (or c for J_c).
bool subgroup_membership(const FiniteMatrix& g, Subgroup s, int m = 1);
/// Generators of the image of the subgroup in GL2(Z/p^level).
std::vector<FiniteMatrix> subgroup_generators(uint64_t p, int level, Subgroup s, int m = 1);
/// All elements of the subgroup generated by gens (finite closure).
std::vector<FiniteMatrix> generated_subgroup(const std::vector<FiniteMatrix>& gens);

/// Pi^{-1} g Pi = Pi g Pi^{-1} = [[d, c/p], [p b, a]] for g in I; one digit is lost.
FiniteMatrix conjugate_by_Pi(const FiniteMatrix& g);

/// Point of P^1(Z/p^c): (gamma : 1) or (1 : p gamma').
struct CosetLabel {
  bool affine = true;
  uint64_t gamma = 0;

  friend bool operator==(const CosetLabel&, const CosetLabel&) = default;
  std::string to_string(uint64_t p) const;
};

/// Canonical representatives of J_c\K at level c, indexed 0..p^c + p^{c-1} - 1.
class CosetSpace {
 public:
  CosetSpace(uint64_t p, int c);

  uint64_t p() const { return p_; }
  int level() const { return c_; }
  size_t size() const { return labels_.size(); }
  const CosetLabel& label(size_t i) const { return labels_[i]; }
  size_t index_of(const CosetLabel& l) const;
  FiniteMatrix representative(size_t i) const;

  struct Decomposition {
    size_t index;
    FiniteMatrix j;  // x = j * representative(index), j in J_c
  };
  Decomposition decompose(const FiniteMatrix& x) const;

 private:
  uint64_t p_;
  int c_;
  uint64_t pc_;
  std::vector<CosetLabel> labels_;
};

enum class IwahoriSide { One, S };
/// One iff the lower-left entry is divisible by p (x in J_c I), else S (x in J_c s I).
IwahoriSide iwahori_side(const FiniteMatrix& x);

/// Exact element of GL2(Q_p) with rational entries.
struct QMatrix2 {
  mpq_class a = 1, b = 0, c = 0, d = 1;

  static QMatrix2 identity() { return {}; }
  static QMatrix2 pi(uint64_t p);
  static QMatrix2 from_finite(const FiniteMatrix& m);
  mpq_class det() const { return a * d - b * c; }
  QMatrix2 inverse() const;
  QMatrix2 scaled(const mpq_class& s) const { return {a * s, b * s, c * s, d * s}; }
  bool integral_at(uint64_t p) const;
  /// Integral with unit determinant.
  bool in_gl2_zp(uint64_t p) const;
  /// Reduction of an integral matrix mod p^level.
  FiniteMatrix reduce(uint64_t p, int level) const;
  friend QMatrix2 operator*(const QMatrix2& x, const QMatrix2& y);
  friend bool operator==(const QMatrix2& x, const QMatrix2& y) = default;
  std::string to_string() const;
};

/// p^z as a rational, z of any sign.
mpq_class p_power(uint64_t p, int64_t z);
int64_t padic_val(const mpq_class& q, uint64_t p);
int64_t padic_val(const mpz_class& z, uint64_t p);
/// Residue of a p-integral rational mod p^level.
uint64_t residue_mod(const mpq_class& q, uint64_t p, int level);

/// p^z Pi^e k with e in {0, 1} and k in K mod p^level; Pi^2 is folded into z.
struct ExtendedElement {
  int64_t z = 0;
  int e = 0;
  FiniteMatrix k;

  static ExtendedElement of(const FiniteMatrix& m) { return {0, 0, m}; }
  static ExtendedElement pi(uint64_t p, int level) { return {0, 1, FiniteMatrix::identity(p, level)}; }
  /// (-1)^{val det}
  int delta() const { return ((2 * z + e) % 2 == 0) ? 1 : -1; }
  friend ExtendedElement operator*(const ExtendedElement& x, const ExtendedElement& y);
  friend bool operator==(const ExtendedElement& x, const ExtendedElement& y);
};

}  // namespace padicdiag
