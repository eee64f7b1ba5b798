#pragma once

// Smooth characters of Q_p^x, the induced representation Ind_{J_c}^K theta
// at level c, W = Sym^{k-2} L^2, and small helpers for modules given by
// generator matrices.

#include <string>
#include <utility>
#include <vector>

#include "padicdiag/dvr_linalg.hpp"
#include "padicdiag/gl2_finite.hpp"

namespace padicdiag {

/// chi(p^n u) = value_at_p^n * theta(u mod p^conductor). theta is given by
/// its value at the fixed primitive root mod p^2.
class SmoothCharacter {
 public:
  SmoothCharacter() = default;
  static SmoothCharacter make(const FieldElement& value_at_p, int conductor, const FieldElement& theta_at_generator);
  static SmoothCharacter unramified(const FieldElement& value_at_p);

  const FieldContext& context() const { return value_at_p_.context(); }
  const FieldElement& value_at_p() const { return value_at_p_; }
  int conductor() const { return conductor_; }
  const FieldElement& theta_at_generator() const { return theta_gen_; }
  bool is_unramified() const { return conductor_ == 0; }
  /// theta(u) for an integer u prime to p.
  FieldElement on_unit(uint64_t u) const;
  FieldElement operator()(const mpq_class& x) const;
  SmoothCharacter with_value_at_p(const FieldElement& v) const;

 private:
  FieldElement value_at_p_;
  int conductor_ = 0;
  FieldElement theta_gen_;
  uint64_t modulus_ = 1;
  std::vector<FieldElement> table_;  // theta on residues mod p^conductor
};

/// Representation on L^dim given by named generator matrices and the scalar
/// by which p in Z acts.
struct ModuleWithAction {
  std::vector<std::string> basis;
  std::vector<std::pair<std::string, ExactMatrix>> generators;
  FieldElement central;

  size_t dim() const { return basis.size(); }
  const ExactMatrix& action(const std::string& name) const;
};

/// D_0 = Ind_{J_c}^K theta, theta([[a,b],[c,d]]) = theta1(a) theta2(d).
/// Functions are stored by their values at the canonical coset
/// representatives; (g f)(x) = f(x g).
class InducedRepresentation {
 public:
  InducedRepresentation(const SmoothCharacter& theta1, const SmoothCharacter& theta2, uint64_t p, int c);

  const FieldContext& context() const { return theta1_.context(); }
  uint64_t p() const { return cosets_.p(); }
  int level() const { return cosets_.level(); }
  size_t dim() const { return cosets_.size(); }
  const CosetSpace& cosets() const { return cosets_; }
  FieldElement theta(const FiniteMatrix& j) const;
  /// Matrix of g in K (any level >= c).
  ExactMatrix matrix(const FiniteMatrix& g) const;
  /// f(x) for a coordinate vector f (one column) and x in K.
  FieldElement evaluate(const ExactMatrix& f, const FiniteMatrix& x) const;
  /// Module with the generators of K and central scalar z.
  ModuleWithAction module(const FieldElement& central) const;

 private:
  SmoothCharacter theta1_, theta2_;
  CosetSpace cosets_;
};

/// Matrix of g = [[a,b],[c,d]] on Sym^{k-2} L^2 in the basis x^{n-j} y^j,
/// n = k - 2, with (g P)(x, y) = P(a x + c y, b x + d y).
ExactMatrix sym_power_matrix(int k, const FieldElement& a, const FieldElement& b, const FieldElement& c,
                             const FieldElement& d);
ExactMatrix sym_power_matrix(const FieldContext& ctx, int k, const QMatrix2& g);
/// W with the generators of K and central scalar p^{k-2}.
ModuleWithAction sym_power(const FieldContext& ctx, int k);

/// Kronecker product of modules with the same generator names.
ModuleWithAction tensor(const ModuleWithAction& a, const ModuleWithAction& b);
/// Common fixed space of the given matrices as a submodule of m; the
/// generators of m that preserve it are inherited.
struct Invariants {
  ExactMatrix basis;  // columns in the coordinates of m
  ModuleWithAction module;
};
Invariants invariants_of(const ModuleWithAction& m, const std::vector<ExactMatrix>& group);

/// Names and integral lifts of the generators of K used throughout.
std::vector<std::pair<std::string, QMatrix2>> k_generators(uint64_t p);
std::vector<std::pair<std::string, QMatrix2>> iwahori_generators(uint64_t p);

}  // namespace padicdiag
