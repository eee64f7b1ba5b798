#include "doctest.h"

#include <map>
#include <random>
#include <set>

#include "padicdiag/gl2_finite.hpp"

using namespace padicdiag;

namespace {

std::vector<FiniteMatrix> all_invertible(uint64_t p, int level) {
  const int64_t m = static_cast<int64_t>(power_of(p, level));
  std::vector<FiniteMatrix> out;
  for (int64_t a = 0; a < m; ++a)
    for (int64_t b = 0; b < m; ++b)
      for (int64_t c = 0; c < m; ++c)
        for (int64_t d = 0; d < m; ++d) {
          FiniteMatrix g(p, level, a, b, c, d);
          if (g.invertible()) out.push_back(g);
        }
  return out;
}

FiniteMatrix random_k(std::mt19937_64& rng, uint64_t p, int level) {
  std::uniform_int_distribution<int64_t> dist(0, static_cast<int64_t>(power_of(p, level)) - 1);
  for (;;) {
    FiniteMatrix g(p, level, dist(rng), dist(rng), dist(rng), dist(rng));
    if (g.invertible()) return g;
  }
}

}  // namespace

TEST_CASE("finite matrix basics") {
  const FiniteMatrix s = FiniteMatrix::weyl(3, 2);
  CHECK(s * s == FiniteMatrix::identity(3, 2));
  CHECK(FiniteMatrix(3, 1, -1, 4, 7, 9) == FiniteMatrix(3, 1, 2, 1, 1, 0));

  // inverse against the adjugate over the integers
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const FiniteMatrix g = random_k(rng, 3, 4);
    const FiniteMatrix gi = g.inverse();
    CHECK(g * gi == FiniteMatrix::identity(3, 4));
    CHECK(gi * g == FiniteMatrix::identity(3, 4));
    const uint64_t di = inverse_mod(g.det(), 81);
    CHECK(gi.a() == g.d() * di % 81);
    CHECK(gi.b() == (81 - g.b()) % 81 * di % 81);
  }
  CHECK_THROWS_AS(FiniteMatrix(3, 2, 3, 0, 0, 1).inverse(), DomainError);
  CHECK_THROWS_AS(FiniteMatrix(3, 40, 1, 0, 0, 1), InvalidArgument);
}

TEST_CASE("primitive roots generate units mod p^2") {
  for (uint64_t p : {3u, 5u, 7u, 11u}) {
    const uint64_t g = primitive_root(p);
    std::set<uint64_t> seen;
    uint64_t x = 1;
    for (uint64_t i = 0; i < p * (p - 1); ++i) {
      seen.insert(x);
      x = x * g % (p * p);
    }
    CHECK(seen.size() == p * (p - 1));
  }
}

TEST_CASE("membership examples and conjugation by Pi") {
  const FiniteMatrix g(3, 2, 1, 1, 3, 1);
  CHECK(subgroup_membership(g, Subgroup::Im, 1));
  CHECK(subgroup_membership(g, Subgroup::I));
  CHECK_FALSE(subgroup_membership(g, Subgroup::Km, 1));
  CHECK(conjugate_by_Pi(g) == FiniteMatrix(3, 1, 1, 1, 3, 1));
  CHECK(conjugate_by_Pi(FiniteMatrix(3, 3, 1, 1, 3, 1)) == FiniteMatrix(3, 2, 1, 1, 3, 1));
  CHECK_THROWS_AS(conjugate_by_Pi(FiniteMatrix(3, 2, 1, 0, 1, 1)), DomainError);

  // against the rational computation Pi^{-1} g Pi
  std::mt19937_64 rng(11);
  const QMatrix2 pi = QMatrix2::pi(3);
  for (int t = 0; t < 100; ++t) {
    FiniteMatrix k = random_k(rng, 3, 4);
    k = FiniteMatrix(3, 4, k.a(), k.b(), 3 * k.c(), k.d());
    if (!k.invertible()) continue;
    const QMatrix2 q = pi.inverse() * QMatrix2::from_finite(k) * pi;
    REQUIRE(q.integral_at(3));
    CHECK(q.reduce(3, 3) == conjugate_by_Pi(k));
    CHECK(subgroup_membership(conjugate_by_Pi(k), Subgroup::I));
  }
}

TEST_CASE("generated subgroups match congruence conditions") {
  const auto all9 = all_invertible(3, 2);
  CHECK(all9.size() == 3888);
  struct Case {
    Subgroup s;
    int m;
  };
  for (Case cs : {Case{Subgroup::K, 1}, Case{Subgroup::I, 1}, Case{Subgroup::Im, 1}, Case{Subgroup::Im, 2},
                  Case{Subgroup::Km, 1}, Case{Subgroup::Jc, 1}, Case{Subgroup::Jc, 2}}) {
    CAPTURE(subgroup_name(cs.s));
    CAPTURE(cs.m);
    const auto group = generated_subgroup(subgroup_generators(3, 2, cs.s, cs.m));
    size_t count = 0;
    for (const auto& g : all9) count += subgroup_membership(g, cs.s, cs.m);
    const size_t closure = group.empty() ? 1 : group.size();
    CHECK(closure == count);
    for (const auto& g : group) CHECK(subgroup_membership(g, cs.s, cs.m));
  }
  // J_1 mod 3 is the Borel subgroup of GL2(F3)
  CHECK(generated_subgroup(subgroup_generators(3, 1, Subgroup::Jc, 1)).size() == 12);
  CHECK(generated_subgroup(subgroup_generators(3, 1, Subgroup::K)).size() == 48);
}

TEST_CASE("coset decomposition is a bijection") {
  for (int c : {1, 2}) {
    const CosetSpace cs(3, c);
    CHECK(cs.size() == (c == 1 ? 4u : 12u));
    std::map<size_t, std::set<FiniteMatrix>> classes;
    for (const auto& x : all_invertible(3, c)) {
      const auto dec = cs.decompose(x);
      REQUIRE(dec.index < cs.size());
      CHECK(subgroup_membership(dec.j, Subgroup::Jc, c));
      CHECK(dec.j * cs.representative(dec.index) == x);
      classes[dec.index].insert(x);
    }
    CHECK(classes.size() == cs.size());
    // every class is one right J_c-orbit: |J_c mod p^c| elements each
    const size_t jc = generated_subgroup(subgroup_generators(3, c, Subgroup::Jc, c)).size();
    for (const auto& [i, cls] : classes) CHECK(cls.size() == jc);
    for (size_t i = 0; i < cs.size(); ++i) {
      CHECK(cs.index_of(cs.label(i)) == i);
      CHECK(cs.decompose(cs.representative(i)).index == i);
    }
  }
}

TEST_CASE("sampled coset decomposition at higher level") {
  std::mt19937_64 rng(3);
  const CosetSpace cs(5, 2);
  CHECK(cs.size() == 30u);
  for (int t = 0; t < 500; ++t) {
    const FiniteMatrix x = random_k(rng, 5, 4);
    const auto dec = cs.decompose(x);
    CHECK(dec.j * cs.representative(dec.index) == x.reduced(2));
    CHECK(subgroup_membership(dec.j, Subgroup::Jc, 2));
    // right translation by J_c on the left does not change the coset
    const FiniteMatrix j(5, 2, 1 + 5 * t, t, 25, 1);
    if (j.invertible()) CHECK(cs.decompose(j * x.reduced(2)).index == dec.index);
  }
}

TEST_CASE("Iwahori sides of coset representatives") {
  for (int c : {1, 2}) {
    const CosetSpace cs(3, c);
    size_t one = 0, s = 0;
    for (size_t i = 0; i < cs.size(); ++i)
      (iwahori_side(cs.representative(i)) == IwahoriSide::One ? one : s)++;
    CHECK(one == power_of(3, c - 1));
    CHECK(s == power_of(3, c));
  }
}

TEST_CASE("extended elements") {
  const ExtendedElement pi = ExtendedElement::pi(3, 3);
  const ExtendedElement sq = pi * pi;
  CHECK(sq.z == 1);
  CHECK(sq.e == 0);
  CHECK(sq.delta() == 1);
  CHECK(pi.delta() == -1);
  const FiniteMatrix k(3, 3, 1, 1, 3, 1);
  // k Pi = Pi conj(k)
  const ExtendedElement lhs = ExtendedElement::of(k) * pi;
  CHECK(lhs.e == 1);
  CHECK(lhs.k == conjugate_by_Pi(k));
  // matches the rational product
  const QMatrix2 q = QMatrix2::from_finite(k) * QMatrix2::pi(3);
  const QMatrix2 q2 = QMatrix2::pi(3) * QMatrix2::from_finite(lhs.k);
  CHECK(q.reduce(3, 2) == q2.reduce(3, 2));
  CHECK(padic_val(mpq_class(18, 5), 3) == 2);
  CHECK(residue_mod(mpq_class(1, 2), 3, 2) == 5);
}
