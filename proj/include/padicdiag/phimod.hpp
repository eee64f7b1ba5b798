#pragma once

// The filtered phi-module D_{k,a_p}: basis e1, e2 with
//   phi(e1) = p^{k-1} e2,  phi(e2) = -e1 + a_p e2,
// Fil^i = D for i <= 0, L e1 for 1 <= i <= k-1, 0 beyond.

#include <string>
#include <vector>

#include "padicdiag/dvr_linalg.hpp"

namespace padicdiag {

struct PhiModule {
  int k = 2;
  FieldElement a_p;
  ExactMatrix phi;  // columns phi(e1), phi(e2)
  const FieldContext& context() const { return a_p.context(); }
  int fil_dim(int i) const { return i <= 0 ? 2 : (i <= k - 1 ? 1 : 0); }
};

/// InvalidArgument unless k >= 2 and val(a_p) > 0.
PhiModule make_phimod(int k, const FieldElement& a_p);

struct Polygons {
  std::vector<Valuation> hodge;   // {0, k-1}
  std::vector<Valuation> newton;  // slopes of X^2 - a_p X + p^{k-1}, increasing
};

Polygons polygons(const PhiModule& d);
/// Newton and Hodge totals agree and every phi-stable line L' over L has
/// val(eigenvalue) >= t_H(L').
bool weak_admissibility(const PhiModule& d);
/// false iff a_p^2 = 4 p^{k-1}.
bool frobenius_semisimple(const PhiModule& d);

/// Square root in L, if one exists (p odd).
std::optional<FieldElement> square_root(const FieldElement& x);

enum class ReductionKind { Irreducible, SplitPrincipalSeries };

struct ReductionType {
  ReductionKind kind = ReductionKind::Irreducible;
  int twist_exponent = 0;
  std::vector<std::string> character_labels;
  std::string to_string() const;
};

/// m = floor((k-2)/(p-1)).
int blz_threshold(uint64_t p, int k);
/// DomainError unless val_ap > m and p > 2.
ReductionType blz_reduction_type(uint64_t p, int k, const Valuation& val_ap);
/// n - e m; DomainError when n < e m.
int congruence_precision(int n, int e, int k, uint64_t p);

/// Q_p for odd k, Q_p[x]/(x^2 - p) for even k, so that p^{(k-1)/2} lies in L.
/// digits counts powers of p; the ramified field gets twice as many pi-digits.
const FieldContext& weight_field(uint64_t p, int k, int digits);
/// sign * p^{(k-1)/2} in weight_field(p, k, ...).
FieldElement weight_lambda(const FieldContext& ctx, int k, int sign);

struct ApproximationStep {
  int j = 0;
  FieldElement x, a_p;
  int64_t measured = 0;  // ord of a_p - a_p(j), in powers of pi
  int64_t bound = 0;     // a + j + e m
  bool congruence_ok = false;
  bool valuation_ok = false;  // val a_p(j) = (k-1)/2
  bool x_nontrivial = false;  // x^2 != 1
  bool ok() const { return congruence_ok && valuation_ok && x_nontrivial; }
};

/// x_j = 1 + pi^{e(a+j)}, a_p(j) = lambda (x_j + x_j^{-1}) with
/// lambda = sign p^{(k-1)/2}; compares with a_p = 2 lambda.
std::vector<ApproximationStep> approximation_sequence(uint64_t p, int k, int sign, int a, int j_max, int digits = 30);
/// Same with explicit x_j (InvalidArgument when some x_j = 1).
std::vector<ApproximationStep> approximation_sequence(const FieldContext& ctx, int k, int sign, int a,
                                                      const std::vector<FieldElement>& xs);

}  // namespace padicdiag
