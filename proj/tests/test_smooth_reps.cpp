#include "doctest.h"

#include <random>
#include <set>

#include "padicdiag/smooth_reps.hpp"

using namespace padicdiag;

namespace {

const FieldContext& q3() { return make_field(3, "trivial", 12); }

FieldElement I(int64_t n) { return FieldElement::from_int(q3(), n); }

FiniteMatrix random_k(std::mt19937_64& rng, uint64_t p, int level) {
  std::uniform_int_distribution<int64_t> dist(0, static_cast<int64_t>(power_of(p, level)) - 1);
  for (;;) {
    FiniteMatrix g(p, level, dist(rng), dist(rng), dist(rng), dist(rng));
    if (g.invertible()) return g;
  }
}

std::vector<ExactMatrix> group_matrices(const InducedRepresentation& ind, Subgroup s, int m) {
  std::vector<ExactMatrix> out;
  for (const auto& g : subgroup_generators(ind.p(), ind.level(), s, m)) out.push_back(ind.matrix(g));
  if (out.empty()) out.push_back(identity_matrix(ind.context(), ind.dim()));
  return out;
}

}  // namespace

TEST_CASE("smooth characters") {
  const auto chi = SmoothCharacter::unramified(FieldElement::from_rational(q3(), 1, 3));
  CHECK(chi(mpq_class(3)) == FieldElement::from_rational(q3(), 1, 3));
  CHECK(chi(mpq_class(2)) == I(1));
  CHECK(chi(mpq_class(18)) == FieldElement::from_rational(q3(), 1, 9));
  const auto absval = SmoothCharacter::unramified(FieldElement::from_rational(q3(), 1, 3));
  CHECK(absval(mpq_class(9, 2)).valuation() == Valuation::of(-2, 1));

  const auto quad = SmoothCharacter::make(I(1), 1, I(-1));
  CHECK(quad.on_unit(2) == I(-1));
  CHECK(quad.on_unit(2) * quad.on_unit(2) == I(1));
  CHECK(quad.on_unit(4) == I(1));
  CHECK(quad(mpq_class(6)) == I(-1));
  // quadratic character mod 9 through the primitive root 2
  const auto quad9 = SmoothCharacter::make(I(1), 2, I(-1));
  for (uint64_t a = 1; a < 9; ++a)
    if (a % 3) CHECK(quad9.on_unit(a) == quad.on_unit(a));
  CHECK_THROWS_AS(SmoothCharacter::make(I(1), 1, I(2)), InvalidArgument);
  CHECK_THROWS_AS(SmoothCharacter::make(I(1), 0, I(-1)), InvalidArgument);
  CHECK_THROWS_AS(SmoothCharacter::unramified(I(0)), InvalidArgument);
}

TEST_CASE("induced representation is a homomorphism") {
  std::mt19937_64 rng(17);
  const auto triv = SmoothCharacter::unramified(I(1));
  const auto quad = SmoothCharacter::make(I(1), 1, I(-1));
  for (int c : {1, 2}) {
    for (const auto& th : {triv, quad}) {
      const InducedRepresentation ind(th, triv, 3, c);
      CHECK(ind.dim() == power_of(3, c - 1) * 4);
      CHECK(matrices_equal(ind.matrix(FiniteMatrix::identity(3, c)), identity_matrix(q3(), ind.dim())));
      for (int t = 0; t < 100; ++t) {
        const FiniteMatrix g = random_k(rng, 3, c), h = random_k(rng, 3, c);
        CHECK(matrices_equal(ind.matrix(g) * ind.matrix(h), ind.matrix(g * h)));
      }
      // K_c acts trivially
      for (const auto& m : group_matrices(ind, Subgroup::Km, c))
        CHECK(matrices_equal(m, identity_matrix(q3(), ind.dim())));
    }
  }
  CHECK_THROWS_AS(InducedRepresentation(SmoothCharacter::make(I(1), 2, I(-1)), triv, 3, 1), InvalidArgument);
}

TEST_CASE("invariant subspaces of the induced representation") {
  const auto triv = SmoothCharacter::unramified(I(1));
  const InducedRepresentation ind(triv, triv, 3, 1);
  const auto d0 = ind.module(I(1));
  CHECK(invariants_of(d0, group_matrices(ind, Subgroup::K, 1)).basis.cols() == 1);
  CHECK(invariants_of(d0, group_matrices(ind, Subgroup::Im, 1)).basis.cols() == 2);
  CHECK(invariants_of(d0, group_matrices(ind, Subgroup::I, 1)).basis.cols() == 2);
  // the K-invariant line is the constant function
  const ExactMatrix k_inv = invariants_of(d0, group_matrices(ind, Subgroup::K, 1)).basis;
  for (size_t i = 1; i < 4; ++i) CHECK(k_inv(i, 0) == k_inv(0, 0));

  const InducedRepresentation ind2(triv, triv, 3, 2);
  const size_t dim_i2 = invariants_of(ind2.module(I(1)), group_matrices(ind2, Subgroup::Im, 2)).basis.cols();
  // I_2-orbits on J_2\K: brute-force count of orbits of the right action
  std::set<std::set<size_t>> orbits;
  const auto group = generated_subgroup(subgroup_generators(3, 2, Subgroup::Im, 2));
  for (size_t l = 0; l < ind2.dim(); ++l) {
    std::set<size_t> orb;
    for (const auto& g : group) orb.insert(ind2.cosets().decompose(ind2.cosets().representative(l) * g).index);
    orbits.insert(orb);
  }
  CHECK(dim_i2 == orbits.size());
}

TEST_CASE("symmetric powers") {
  const FieldElement a = I(5), d = I(7);
  CHECK(matrices_equal(sym_power_matrix(2, a, I(0), I(0), d), identity_matrix(q3(), 1)));
  const ExactMatrix m4 = sym_power_matrix(4, a, I(0), I(0), d);
  CHECK(matrices_equal(m4, matrix_from_ints(q3(), 3, 3, {25, 0, 0, 0, 35, 0, 0, 0, 49})));
  const ExactMatrix pi3 = sym_power_matrix(q3(), 3, QMatrix2::pi(3));
  CHECK(matrices_equal(pi3, matrix_from_ints(q3(), 2, 2, {0, 1, 3, 0})));
  for (int k = 2; k <= 6; ++k) {
    const ExactMatrix pk = sym_power_matrix(q3(), k, QMatrix2::pi(3));
    CHECK(matrices_equal(pk * pk, identity_matrix(q3(), k - 1).scaled(I(3).pow(k - 2))));
  }
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dist(-20, 20);
  for (int t = 0; t < 50; ++t) {
    const QMatrix2 g{dist(rng), dist(rng), dist(rng), dist(rng)};
    const QMatrix2 h{mpq_class(dist(rng), 3), dist(rng), dist(rng), dist(rng)};
    for (int k : {3, 4, 5})
      CHECK(matrices_equal(sym_power_matrix(q3(), k, g) * sym_power_matrix(q3(), k, h),
                           sym_power_matrix(q3(), k, g * h)));
  }
  CHECK_THROWS_AS(sym_power(q3(), 1), InvalidArgument);
}

TEST_CASE("tensor products") {
  const auto triv = SmoothCharacter::unramified(I(1));
  const InducedRepresentation ind(triv, triv, 3, 1);
  // central scalar of D0 (x) W for lambda1 lambda2 = 1/3 and k = 3
  const auto d0 = ind.module(FieldElement::from_rational(q3(), 1, 3));
  const auto w = sym_power(q3(), 3);
  const auto t = tensor(d0, w);
  CHECK(t.dim() == 8);
  CHECK(t.central == I(1));
  const auto t2 = tensor(d0, sym_power(q3(), 2));
  for (const auto& [name, g] : d0.generators) CHECK(matrices_equal(t2.action(name), g));
}
