#include "doctest.h"

#include <random>
#include <set>

#include "padicdiag/tree_homology.hpp"

using namespace padicdiag;

namespace {

const FieldContext& q3() { return make_field(3, "trivial", 20); }

FieldElement I(int64_t n) { return FieldElement::from_int(q3(), n); }

Diagram principal(FieldElement l1, FieldElement l2, int c, int k, bool ramified = false) {
  const auto triv = SmoothCharacter::unramified(I(1));
  const auto quad = SmoothCharacter::make(I(1), 1, I(-1));
  return Diagram::build_principal({l1, l2, ramified ? quad : triv, triv, c, k});
}

// distance through elementary divisors: v(det) - 2 min v(entries)
int64_t distance_oracle(const QMatrix2& g, uint64_t p) {
  int64_t m = kInfiniteOrd;
  for (const mpq_class* x : {&g.a, &g.b, &g.c, &g.d})
    if (*x != 0) m = std::min(m, padic_val(*x, p));
  return padic_val(g.det(), p) - 2 * m;
}

}  // namespace

TEST_CASE("ball sizes follow the tree growth formula") {
  for (uint64_t p : {3, 5}) {
    size_t expected = 1, shell = p + 1;
    for (int R = 0; R <= (p == 3 ? 4 : 2); ++R) {
      if (R > 0) {
        expected += shell;
        shell *= p;
      }
      const TreeBall b = enumerate_ball(p, R);
      CHECK(b.n_vertices() == expected);
      CHECK(b.n_edges() + 1 == b.n_vertices());
    }
  }
  CHECK(enumerate_ball(3, 1).n_vertices() == 5);
  CHECK(enumerate_ball(3, 2).n_vertices() == 17);
  CHECK(enumerate_ball(3, 3).n_vertices() == 53);
  CHECK_THROWS_AS(enumerate_ball(3, 12, 1000), DomainError);
  CHECK_THROWS_AS(enumerate_ball(4, 1), InvalidArgument);
}

TEST_CASE("vertex keys") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int64_t> dist(-30, 30);
  std::uniform_int_distribution<int> zd(-2, 2);
  for (int t = 0; t < 300; ++t) {
    mpq_class a(dist(rng), 9), d(dist(rng), 3);
    a.canonicalize();
    d.canonicalize();
    const QMatrix2 g{a, mpq_class(dist(rng)), mpq_class(dist(rng)), d};
    if (g.det() == 0) continue;
    CHECK(vertex_distance(vertex_key(g, 3), 3) == distance_oracle(g, 3));
    QMatrix2 k{mpq_class(dist(rng)), mpq_class(dist(rng)), mpq_class(dist(rng)), mpq_class(dist(rng))};
    if (!k.in_gl2_zp(3)) continue;
    k = k.scaled(p_power(3, zd(rng)));
    CHECK(vertex_key(g * k, 3) == vertex_key(g, 3));
  }
  // the stored edge endpoints resolve to the recorded vertices
  const TreeBall b = enumerate_ball(3, 3);
  std::set<std::pair<int64_t, std::string>> keys;
  for (size_t i = 0; i < b.n_vertices(); ++i) {
    CHECK(vertex_distance(b.key(i), 3) <= 3);
    keys.insert({b.key(i).n, b.key(i).b.get_str()});
  }
  CHECK(keys.size() == b.n_vertices());
  for (const auto& e : b.edges()) {
    CHECK(b.find_vertex(e.g) == e.source);
    CHECK(b.find_vertex(e.g * QMatrix2::pi(3)) == e.target);
    const int64_t ds = vertex_distance(b.key(e.source), 3), dt = vertex_distance(b.key(e.target), 3);
    CHECK((ds - dt == 1 || dt - ds == 1));
  }
}

TEST_CASE("boundary at radius one") {
  const Diagram d = principal(I(1), I(1), 1, 2);
  const TreeBall b = enumerate_ball(3, 1);
  const ExactMatrix m = boundary_matrix(d, b);
  CHECK(m.rows() == 20);
  CHECK(m.cols() == 8);
  CHECK(rank(m) == 8);
  // each edge block touches exactly its two endpoints
  for (size_t e = 0; e < b.n_edges(); ++e) {
    size_t touched = 0;
    for (size_t v = 0; v < b.n_vertices(); ++v)
      if (min_ord(m.block(v * 4, e * 2, 4, 2)) < kInfiniteOrd) ++touched;
    CHECK(touched == 2);
  }
  // standard edge: r at the standard vertex
  const auto col = boundary_of(d, b, QMatrix2::identity(), identity_matrix(q3(), 2));
  REQUIRE(col);
  CHECK(matrices_equal(col->block(0, 0, 4, 2), d.r()));

  const Diagram zero = d.with_r(zero_matrix(q3(), 4, 2));
  CHECK(min_ord(boundary_matrix(zero, b)) == kInfiniteOrd);
  const HomologyReport hz = homology_report(zero, b);
  CHECK(hz.ker_dim == hz.n_edges * 2);
}

TEST_CASE("boundary is well defined and equivariant") {
  const TreeBall b = enumerate_ball(3, 2);
  for (int k : {2, 3, 4}) {
    for (bool ram : {false, true}) {
      const Diagram d = principal(I(2), I(5), 1, k, ram);
      const AxiomReport rep = check_boundary_welldefined(d, b, 120, 11);
      for (const auto& c : rep.checks) MESSAGE(c.name << ": " << c.detail);
      CHECK(rep.all_passed());
    }
  }
  const Diagram d = principal(I(1), I(1), 2, 2);
  CHECK(check_boundary_welldefined(d, b, 100, 5).all_passed());
  BoundaryOptions wrong;
  wrong.flip_sign = true;
  CHECK_FALSE(check_boundary_welldefined(d, b, 100, 5, wrong).all_passed());
}

TEST_CASE("no H1 on small balls") {
  for (int R : {1, 2}) {
    const TreeBall b = enumerate_ball(3, R);
    for (int k : {2, 3}) {
      const HomologyReport h = homology_report(principal(I(2), I(7), 1, k), b);
      CHECK(h.ker_dim == 0);
      CHECK(h.rank + h.ker_dim == h.n_edges * static_cast<size_t>(2 * (k - 1)));
    }
  }
}

TEST_CASE("integral boundary and reduction") {
  const Diagram d = principal(FieldElement::from_rational(q3(), 1, 3), I(1), 1, 3);
  const IntegralDiagram id = integral_structure(d);
  const TreeBall b = enumerate_ball(3, 1);
  const ExactMatrix m = boundary_matrix(id, b);
  CHECK(min_ord(m) >= 0);
  const HomologyReport h = homology_report(id, b);
  CHECK(h.integral);
  CHECK(h.ker_dim == 0);
  CHECK(h.coker_free_rank == h.rows - h.rank);
  MESSAGE("coker invariants " << h.coker_invariants.size());
  for (int n : {1, 2, 3}) CHECK(reduction_compat(id, b, n));
  // the integral boundary is split injective here, so single entries cannot
  // break it; a zeroed column after reduction does
  ResidueMatrix red = reduce_matrix(m, 3);
  for (size_t i = 0; i < m.rows(); ++i) red(i, 0) = Residue(q3(), 3);
  CHECK_FALSE(reduction_compatible(m, red, 3));
  // one entry perturbed after reduction
  const ExactMatrix small = matrix_from_ints(q3(), 2, 2, {1, 0, 0, 3});
  ResidueMatrix rs = reduce_matrix(small, 2);
  CHECK(reduction_compatible(small, rs, 2));
  rs(1, 1) = reduce_mod(I(1), 2);
  CHECK_FALSE(reduction_compatible(small, rs, 2));
  CHECK(reduction_compatible(m, reduce_matrix(m, 3), 3));
}
