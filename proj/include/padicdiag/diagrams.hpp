#pragma once

// Principal-series diagrams D(lambda1, lambda2, theta1, theta2) at level c,
// twisted by W = Sym^{k-2} L^2, their deformations and integral structures.
//
// Coordinates: D0 is Ind_{J_c}^K theta (x) W with basis delta_l (x) w_j,
// index l * dim W + j. D1 has the basis b_i (x) w_j where b_0..b_{m-1}
// span V_1 and the rest span V_s, each b_i scaled so that its first
// nonzero value is 1. r is the inclusion in these coordinates.

#include <cstdint>
#include <string>
#include <vector>

#include "padicdiag/smooth_reps.hpp"

namespace padicdiag {

struct DiagramSpec {
  FieldElement lambda1, lambda2;
  SmoothCharacter theta1, theta2;  // only the restriction to units is used
  int c = 1;
  int k = 2;
};

class Diagram {
 public:
  /// Builds the diagram and checks its axioms; InternalError if they fail.
  static Diagram build_principal(const DiagramSpec& spec);

  const DiagramSpec& spec() const { return spec_; }
  const FieldContext& context() const { return spec_.lambda1.context(); }
  uint64_t p() const { return context().p(); }
  int level() const { return spec_.c; }
  int weight() const { return spec_.k; }
  size_t dim0() const { return r_.rows(); }
  size_t dim1() const { return r_.cols(); }
  size_t w_dim() const { return static_cast<size_t>(spec_.k - 1); }
  size_t dim_v1() const { return v1_base_ * w_dim(); }
  size_t dim_vs() const { return dim1() - dim_v1(); }
  const ExactMatrix& r() const { return r_; }
  const ExactMatrix& pi() const { return pi_; }
  const ExactMatrix& pi_base() const { return pi_base_; }
  const ExactMatrix& d1_base() const { return d1_base_; }
  const FieldElement& central() const { return central_; }
  const InducedRepresentation& induced() const { return ind_; }

  /// Action of g in KZ on D0 (g rational with p-power times GL2(Z_p)).
  ExactMatrix action0(const QMatrix2& g) const;
  /// Action of g in the normalizer of I (generated by I, Pi and Z) on D1.
  ExactMatrix action1(const QMatrix2& g) const;
  /// Action of g in IZ on D1 obtained by restricting action0 (no check).
  ExactMatrix restrict_to_d1(const ExactMatrix& a0) const;
  ExactMatrix u1() const;
  ExactMatrix u2() const;

  Diagram with_pi(const ExactMatrix& pi) const;
  Diagram with_r(const ExactMatrix& r) const;

 private:
  Diagram(const DiagramSpec& spec, InducedRepresentation ind) : spec_(spec), ind_(std::move(ind)) {}
  void compute_left_inverse();

  DiagramSpec spec_;
  InducedRepresentation ind_;
  size_t v1_base_ = 0;
  ExactMatrix d1_base_;  // columns: basis of D1 before the W twist
  ExactMatrix pi_base_;
  ExactMatrix r_;
  ExactMatrix pi_;
  FieldElement central_;
  std::vector<size_t> rows_;  // rows of r forming an invertible square block
  ExactMatrix r_rows_inv_;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AxiomReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

/// (i) Pi^2 is the central scalar, (ii) Pi i Pi^-1 compatibility,
/// (iii) r injective, (iv) r is IZ-equivariant. Random elements of I are
/// drawn with the given seed.
AxiomReport check_diagram_axioms(const Diagram& d, int samples, uint64_t seed);

/// Pi acting by phi_x Pi phi_x^{-1}, phi_x scaling V_1 (x) W by x.
Diagram deform_diagram(const Diagram& d, const FieldElement& x);
/// Identity map D(x) -> D(x^{-1} lambda1, x lambda2, theta1, theta2) as a morphism.
AxiomReport verify_deformation_isomorphism(const Diagram& d, const FieldElement& x);

struct IntegralDiagram {
  Diagram diagram;
  Lattice l0, l1;
  int iterations = 0;
  /// deformation bound of l1 for the splitting V_1 (x) W, V_s (x) W
  int a = 1;
};

/// Grows the standard lattice of D0 by K-closure and by r of (l0 cap D1) +
/// Pi (l0 cap D1) until stable; l1 is then the V_1/V_s-split part of that
/// D1-lattice, so phi_x preserves it for every unit x. DomainError if the
/// central scalar is not a unit or nothing stabilises within max_iterations.
IntegralDiagram integral_structure(const Diagram& d, int max_iterations = 40);
/// Stability of l0 under K and Z, of l1 under I, Z and Pi, and r(l1) in l0.
AxiomReport check_integral(const IntegralDiagram& d);
/// Same lattices with Pi replaced by the deformed action; DomainError if
/// phi_x does not preserve l1.
IntegralDiagram deform_integral(const IntegralDiagram& d, const FieldElement& x);
/// True iff the identity map is compatible with all actions modulo p_L^b.
bool compare_mod(const IntegralDiagram& x, const IntegralDiagram& y, int b);

}  // namespace padicdiag
