#include "doctest.h"

#include <random>

#include "padicdiag/dvr_linalg.hpp"

using namespace padicdiag;

namespace {

using IntMat = std::vector<std::vector<mpz_class>>;

mpz_class det(const IntMat& m) {
  const size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  mpz_class acc = 0;
  for (size_t c = 0; c < n; ++c) {
    IntMat minor;
    for (size_t i = 1; i < n; ++i) {
      std::vector<mpz_class> row;
      for (size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(m[i][j]);
      minor.push_back(row);
    }
    mpz_class term = m[0][c] * det(minor);
    acc += (c % 2 == 0) ? term : mpz_class(-term);
  }
  return acc;
}

void subsets(size_t n, size_t k, size_t start, std::vector<size_t>& cur, std::vector<std::vector<size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// Smith exponents at p from gcds of k x k minors; kInfiniteOrd for zero.
std::vector<int64_t> minors_oracle(const IntMat& a, unsigned long p) {
  const size_t r = a.size(), c = a[0].size();
  std::vector<int64_t> dk;  // v_p of gcd of k-minors
  for (size_t k = 1; k <= std::min(r, c); ++k) {
    std::vector<std::vector<size_t>> rs, cs;
    std::vector<size_t> cur;
    subsets(r, k, 0, cur, rs);
    subsets(c, k, 0, cur, cs);
    mpz_class g = 0;
    for (auto& ri : rs)
      for (auto& ci : cs) {
        IntMat m;
        for (size_t i : ri) {
          std::vector<mpz_class> row;
          for (size_t j : ci) row.push_back(a[i][j]);
          m.push_back(row);
        }
        mpz_class d = det(m);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      }
    if (g == 0) {
      dk.push_back(kInfiniteOrd);
    } else {
      mpz_class rest;
      mpz_class pp(p);
      dk.push_back(static_cast<int64_t>(mpz_remove(rest.get_mpz_t(), g.get_mpz_t(), pp.get_mpz_t())));
    }
  }
  std::vector<int64_t> inv;
  int64_t prev = 0;
  for (auto d : dk) {
    if (d >= kInfiniteOrd) {
      inv.push_back(kInfiniteOrd);
      continue;
    }
    inv.push_back(d - prev);
    prev = d;
  }
  return inv;
}

ExactMatrix to_exact(const FieldContext& ctx, const IntMat& a) {
  ExactMatrix m = zero_matrix(ctx, a.size(), a[0].size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[0].size(); ++j) m(i, j) = FieldElement::from_mpz(ctx, a[i][j]);
  return m;
}

IntMat random_int(std::mt19937_64& rng, size_t r, size_t c, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  std::uniform_int_distribution<int> sh(0, 3);
  IntMat m(r, std::vector<mpz_class>(c));
  for (auto& row : m)
    for (auto& v : row) {
      v = d(rng);
      for (int k = sh(rng); k > 0; --k) v *= 3;
    }
  return m;
}

ExactMatrix random_field_matrix(std::mt19937_64& rng, const FieldContext& ctx, size_t r, size_t c) {
  std::uniform_int_distribution<int> d(-30, 30);
  std::uniform_int_distribution<int> sh(-2, 2);
  ExactMatrix m = zero_matrix(ctx, r, c);
  const auto pi = FieldElement::uniformizer(ctx);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j)
      m(i, j) = FieldElement::from_int(ctx, d(rng)) * pi.pow(sh(rng));
  return m;
}

Lattice random_lattice(std::mt19937_64& rng, const FieldContext& ctx, size_t dim) {
  for (;;) {
    ExactMatrix g = random_field_matrix(rng, ctx, dim, dim);
    if (rank(g) == dim) return Lattice::from_generators(g);
  }
}

}  // namespace

TEST_CASE("smith normal form examples") {
  const auto& q3 = make_field(3, "trivial", 8);
  auto snf = smith_normal_form(matrix_from_ints(q3, 2, 2, {3, 0, 0, 1}));
  CHECK(snf.invariants == std::vector<int64_t>{0, 1});
  auto z = smith_normal_form(zero_matrix(q3, 2, 3));
  CHECK(z.invariants == std::vector<int64_t>{kInfiniteOrd, kInfiniteOrd});
}

TEST_CASE("smith normal form agrees with gcd of minors") {
  std::mt19937_64 rng(99);
  const auto& q3 = make_field(3, "trivial", 12);
  for (int trial = 0; trial < 40; ++trial) {
    const size_t r = 2 + trial % 3, c = 2 + (trial / 3) % 3;
    IntMat a = random_int(rng, r, c, 20);
    const ExactMatrix m = to_exact(q3, a);
    auto snf = smith_normal_form(m);
    CHECK(snf.invariants == minors_oracle(a, 3));
    CHECK(matrices_equal(snf.U * m * snf.V, snf.D));
    CHECK(rank(snf.U) == r);
    CHECK(rank(snf.V) == c);
    // over Z/3^5
    auto res = smith_normal_form(reduce_matrix(m, 5));
    auto oracle = minors_oracle(a, 3);
    for (auto& v : oracle) v = std::min<int64_t>(v, 5);
    CHECK(res.invariants == oracle);
    auto rm = reduce_matrix(m, 5);
    auto prod = res.U * rm * res.V;
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < c; ++j) CHECK(prod(i, j) == res.D(i, j));
  }
}

TEST_CASE("smith invariants survive row and column operations") {
  std::mt19937_64 rng(5);
  const auto& ram = make_field(3, "x^2-3", 10);
  for (int trial = 0; trial < 20; ++trial) {
    ExactMatrix m = random_field_matrix(rng, ram, 3, 3);
    m = m.scaled(FieldElement::uniformizer(ram).pow(-min_ord(m)));
    ExactMatrix e = identity_matrix(ram, 3);
    e(0, 1) = FieldElement::from_int(ram, 7);
    e(2, 0) = FieldElement::uniformizer(ram);
    ExactMatrix f = identity_matrix(ram, 3);
    f(1, 2) = FieldElement::from_int(ram, -4);
    f.swap_cols(0, 2);
    CHECK(smith_normal_form(m).invariants == smith_normal_form(e * m * f).invariants);
  }
}

TEST_CASE("cokernel reduction is right exact") {
  std::mt19937_64 rng(17);
  const auto& q3 = make_field(3, "trivial", 10);
  for (int trial = 0; trial < 30; ++trial) {
    IntMat a = random_int(rng, 3, 4, 15);
    const ExactMatrix m = to_exact(q3, a);
    auto full = smith_normal_form(m, false).invariants;
    for (int n = 1; n <= 4; ++n) {
      auto red = smith_normal_form(reduce_matrix(m, n), false).invariants;
      std::vector<int64_t> capped;
      for (auto v : full) capped.push_back(std::min<int64_t>(v, n));
      CHECK(red == capped);
    }
  }
}

TEST_CASE("kernel, fixed space and inverse") {
  const auto& q3 = make_field(3, "trivial", 8);
  CHECK(fixed_space({identity_matrix(q3, 3)}).cols() == 3);
  auto fs = fixed_space({matrix_from_ints(q3, 2, 2, {1, 0, 0, 2})});
  REQUIRE(fs.cols() == 1);
  CHECK(fs(1, 0).is_zero());
  CHECK_FALSE(fs(0, 0).is_zero());

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    IntMat a = random_int(rng, 3, 3, 9);
    mpz_class d = det(a);
    if (d == 0) continue;
    ExactMatrix inv = inverse(to_exact(q3, a));
    // adjugate oracle: inv(i,j) = (-1)^{i+j} minor(j,i) / det
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 3; ++j) {
        IntMat minor;
        for (size_t r = 0; r < 3; ++r) {
          if (r == j) continue;
          std::vector<mpz_class> row;
          for (size_t c = 0; c < 3; ++c)
            if (c != i) row.push_back(a[r][c]);
          minor.push_back(row);
        }
        mpq_class expect(det(minor), d);
        expect.canonicalize();
        if ((i + j) % 2 == 1) expect = -expect;
        CHECK(inv(i, j) == FieldElement::from_rational(q3, expect));
      }
  }

  auto k = kernel(matrix_from_ints(q3, 2, 3, {1, 2, 3, 2, 4, 6}));
  CHECK(k.cols() == 2);
  CHECK((matrix_from_ints(q3, 2, 3, {1, 2, 3, 2, 4, 6}) * k).is_zero());
  CHECK_THROWS_AS(inverse(matrix_from_ints(q3, 2, 2, {1, 2, 2, 4})), DomainError);
}

TEST_CASE("lattice examples") {
  const auto& q3 = make_field(3, "trivial", 10);
  auto std2 = Lattice::standard(q3, 2);
  CHECK(lattice_compare(lattice_sum(std2, std2), std2).relation == Containment::Equal);
  auto p_std = std2.scaled(FieldElement::from_int(q3, 3));
  CHECK(lattice_compare(lattice_intersect(std2, p_std), p_std).relation == Containment::Equal);
  auto cmp = lattice_compare(p_std, std2);
  CHECK(cmp.relation == Containment::FirstInSecond);
  CHECK(cmp.index == std::vector<int64_t>{1, 1});

  ExactMatrix g = zero_matrix(q3, 2, 2);
  g(0, 0) = FieldElement::one(q3);
  g(0, 1) = FieldElement::from_rational(q3, 1, 9);
  g(1, 1) = FieldElement::one(q3);
  auto m = Lattice::from_generators(g);
  auto inter = lattice_intersect(m, std2);
  auto expected = Lattice::from_generators(matrix_from_ints(q3, 2, 2, {1, 1, 0, 9}));
  CHECK(lattice_compare(inter, expected).relation == Containment::Equal);
  CHECK(lattice_compare(m, std2).relation == Containment::Incomparable);

  ExactMatrix u1 = matrix_from_ints(q3, 2, 1, {1, 0});
  ExactMatrix u2 = matrix_from_ints(q3, 2, 1, {0, 1});
  CHECK(deformation_bound(std2, u1, u2) == 1);
  CHECK(deformation_bound(m, u1, u2) == 2);
  CHECK_THROWS_AS(deformation_bound(m, u1, u1), InvalidArgument);

  auto x = FieldElement::from_int(q3, 4);
  auto v = apply_phi_x(matrix_from_ints(q3, 2, 1, {1, 1}), x, u1, u2);
  CHECK(v(0, 0) == x);
  CHECK(v(1, 0) == FieldElement::one(q3));
  CHECK(matrices_equal(apply_phi_x(u2, x, u1, u2), u2));
  CHECK(matrices_equal(phi_x_matrix(FieldElement::one(q3), u1, u2), identity_matrix(q3, 2)));
  CHECK_THROWS_AS(phi_x_matrix(FieldElement::from_int(q3, 3), u1, u2), DomainError);
  // x = 1 + 9 lies in 1 + p^a for a = 2
  CHECK(lattice_compare(apply_phi_x(m, FieldElement::from_int(q3, 10), u1, u2), m).relation ==
        Containment::Equal);
  CHECK(lattice_compare(apply_phi_x(m, x, u1, u2), m).relation != Containment::Equal);
}

TEST_CASE("lattice operations: inclusions and modular law") {
  std::mt19937_64 rng(31);
  for (const char* poly : {"trivial", "x^2-3"}) {
    const auto& ctx = make_field(3, poly, 14);
    for (int trial = 0; trial < 15; ++trial) {
      const size_t d = 2 + trial % 2;
      auto a = random_lattice(rng, ctx, d);
      auto b = random_lattice(rng, ctx, d);
      auto c0 = random_lattice(rng, ctx, d);
      auto s = lattice_sum(a, b);
      auto i = lattice_intersect(a, b);
      auto r1 = lattice_compare(a, s).relation;
      CHECK((r1 == Containment::Equal || r1 == Containment::FirstInSecond));
      auto r2 = lattice_compare(i, a).relation;
      CHECK((r2 == Containment::Equal || r2 == Containment::FirstInSecond));
      // modular law with a inside c = a + c0
      auto c = lattice_sum(a, c0);
      auto lhs = lattice_sum(a, lattice_intersect(b, c));
      auto rhs = lattice_intersect(lattice_sum(a, b), c);
      CHECK(lattice_compare(lhs, rhs).relation == Containment::Equal);
    }
  }
}

TEST_CASE("phi_x preserves M for x in 1 + p^a") {
  std::mt19937_64 rng(41);
  const auto& q3 = make_field(3, "trivial", 16);
  for (int trial = 0; trial < 10; ++trial) {
    const size_t d = 2 + trial % 3;
    auto m = random_lattice(rng, q3, d);
    ExactMatrix s;
    do {
      s = random_field_matrix(rng, q3, d, d);
    } while (rank(s) != d);
    const size_t k = 1 + trial % (d - 1);
    ExactMatrix u1 = s.block(0, 0, d, k), u2 = s.block(0, k, d, d - k);
    const int a = deformation_bound(m, u1, u2);
    std::uniform_int_distribution<int> t(-40, 40);
    for (int j = 0; j < 5; ++j) {
      auto x = FieldElement::one(q3) + FieldElement::from_int(q3, 3).pow(a + j) * FieldElement::from_int(q3, t(rng));
      CHECK(lattice_compare(apply_phi_x(m, x, u1, u2), m).relation == Containment::Equal);
      // x in 1 + p^{a+j}: phi_x is the identity on M / p^j M
      auto diff = (phi_x_matrix(x, u1, u2) - identity_matrix(q3, d)) * m.basis();
      auto coords = m.coordinates(diff);
      REQUIRE(coords);
      CHECK((coords->is_zero() || min_ord(*coords) >= j));
    }
    // a lattice split along U1 (+) U2 has a = 1 and phi_x = id mod p^b for x in 1 + p^b
    const Lattice split = Lattice::from_generators(u1.hstack(u2));
    CHECK(deformation_bound(split, u1, u2) == 1);
    for (int b = 1; b <= 3; ++b) {
      auto x = FieldElement::one(q3) + FieldElement::from_int(q3, 3).pow(b) * FieldElement::from_int(q3, t(rng));
      auto coords = split.coordinates((phi_x_matrix(x, u1, u2) - identity_matrix(q3, d)) * split.basis());
      REQUIRE(coords);
      CHECK((coords->is_zero() || min_ord(*coords) >= b));
    }
  }
}
