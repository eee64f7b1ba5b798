#include "doctest.h"

#include <random>

#include "padicdiag/diagrams.hpp"

using namespace padicdiag;

namespace {

const FieldContext& q3() { return make_field(3, "trivial", 16); }

FieldElement I(const FieldContext& ctx, int64_t n) { return FieldElement::from_int(ctx, n); }
FieldElement Q(const FieldContext& ctx, int64_t a, int64_t b) { return FieldElement::from_rational(ctx, a, b); }

DiagramSpec spec(const FieldContext& ctx, FieldElement l1, FieldElement l2, int c, int k, bool ramified = false) {
  const auto triv = SmoothCharacter::unramified(I(ctx, 1));
  const auto quad = SmoothCharacter::make(I(ctx, 1), 1, I(ctx, -1));
  return {l1, l2, ramified ? quad : triv, triv, c, k};
}

}  // namespace

TEST_CASE("principal diagram at level one") {
  const FieldContext& ctx = q3();
  const Diagram d = Diagram::build_principal(spec(ctx, I(ctx, 1), I(ctx, 1), 1, 2));
  CHECK(d.dim0() == 4);
  CHECK(d.dim1() == 2);
  CHECK(d.dim_v1() == 1);
  CHECK(d.dim_vs() == 1);
  CHECK(matrices_equal(d.pi(), matrix_from_ints(ctx, 2, 2, {0, 1, 1, 0})));

  const Diagram d25 = Diagram::build_principal(spec(ctx, I(ctx, 2), I(ctx, 5), 1, 2));
  CHECK(matrices_equal(d25.pi(), matrix_from_ints(ctx, 2, 2, {0, 5, 2, 0})));
  CHECK(matrices_equal(d25.pi() * d25.pi(), identity_matrix(ctx, 2).scaled(I(ctx, 10))));

  const Diagram d3 = Diagram::build_principal(spec(ctx, Q(ctx, 1, 3), I(ctx, 1), 1, 3));
  CHECK(d3.central() == I(ctx, 1));
  CHECK(matrices_equal(d3.pi() * d3.pi(), identity_matrix(ctx, 4)));
}

TEST_CASE("V1 and Vs split D1") {
  const FieldContext& ctx = q3();
  for (bool ram : {false, true}) {
    const Diagram d = Diagram::build_principal(spec(ctx, I(ctx, 2), I(ctx, 7), 2, 2, ram));
    CHECK(d.dim_v1() + d.dim_vs() == d.dim1());
    CHECK(d.dim_v1() > 0);
    CHECK(d.dim_vs() > 0);
    // every V1 vector is supported on side-one labels, every Vs vector on side-s labels
    const CosetSpace& cs = d.induced().cosets();
    for (size_t j = 0; j < d.d1_base().cols(); ++j)
      for (size_t l = 0; l < cs.size(); ++l) {
        const bool one = iwahori_side(cs.representative(l)) == IwahoriSide::One;
        if (!d.d1_base()(l, j).is_zero()) CHECK(one == (j < d.dim_v1()));
      }
  }
}

TEST_CASE("axiom checks detect broken diagrams") {
  const FieldContext& ctx = q3();
  const Diagram d = Diagram::build_principal(spec(ctx, I(ctx, 2), I(ctx, 5), 1, 3));
  CHECK(check_diagram_axioms(d, 30, 7).all_passed());
  const auto bad_pi = check_diagram_axioms(d.with_pi(identity_matrix(ctx, d.dim1())), 10, 7);
  CHECK_FALSE(bad_pi.checks[0].passed);
  const auto bad_r = check_diagram_axioms(d.with_r(zero_matrix(ctx, d.dim0(), d.dim1())), 10, 7);
  CHECK_FALSE(bad_r.checks[1].passed);
}

TEST_CASE("deformation") {
  const FieldContext& ctx = q3();
  const Diagram d = Diagram::build_principal(spec(ctx, I(ctx, 1), I(ctx, 1), 1, 2));
  CHECK(matrices_equal(deform_diagram(d, I(ctx, 1)).pi(), d.pi()));
  const Diagram d4 = deform_diagram(d, I(ctx, 4));
  ExactMatrix expect = zero_matrix(ctx, 2, 2);
  expect(0, 1) = I(ctx, 4);
  expect(1, 0) = Q(ctx, 1, 4);
  CHECK(matrices_equal(d4.pi(), expect));
  CHECK(matrices_equal(d4.pi() * d4.pi(), identity_matrix(ctx, 2)));
  CHECK(matrices_equal(deform_diagram(d4, Q(ctx, 1, 4)).pi(), d.pi()));
  CHECK(verify_deformation_isomorphism(d, I(ctx, 4)).all_passed());
  const Diagram k3 = Diagram::build_principal(spec(ctx, Q(ctx, 1, 3), I(ctx, 1), 1, 3, true));
  CHECK(verify_deformation_isomorphism(k3, I(ctx, 4)).all_passed());
  CHECK_THROWS_AS(deform_diagram(d, I(ctx, 3)), DomainError);
}

TEST_CASE("integral structures") {
  const FieldContext& ctx = q3();
  const Diagram d = Diagram::build_principal(spec(ctx, I(ctx, 1), I(ctx, 1), 1, 2));
  const IntegralDiagram id = integral_structure(d);
  CHECK(lattice_compare(id.l1, Lattice::standard(ctx, 2)).relation == Containment::Equal);
  CHECK(id.a == 1);

  const Diagram k3 = Diagram::build_principal(spec(ctx, Q(ctx, 1, 3), I(ctx, 1), 1, 3));
  const IntegralDiagram ik3 = integral_structure(k3);
  MESSAGE("k=3 iterations " << ik3.iterations << " a=" << ik3.a);
  CHECK(check_integral(ik3).all_passed());

  CHECK_THROWS_AS(integral_structure(Diagram::build_principal(spec(ctx, I(ctx, 1), I(ctx, 1), 1, 3))),
                  DomainError);

  // congruences of the deformed structure
  const IntegralDiagram x4 = deform_integral(ik3, I(ctx, 4));
  CHECK(compare_mod(x4, ik3, 1));
  CHECK_FALSE(compare_mod(x4, ik3, 2));
  const IntegralDiagram x10 = deform_integral(ik3, I(ctx, 10));
  CHECK(compare_mod(x10, ik3, 2));
  CHECK(compare_mod(ik3, ik3, 10));
  // the D1 lattice is split, so any unit x preserves it
  CHECK_NOTHROW(deform_integral(ik3, I(ctx, 2)));
}

TEST_CASE("integral structure over a ramified field") {
  const FieldContext& ctx = make_field(3, "x^2-3", 40);
  const FieldElement lam = FieldElement::uniformizer(ctx).pow(3);
  const auto triv = SmoothCharacter::unramified(I(ctx, 1));
  const Diagram d = Diagram::build_principal({lam.inverse(), I(ctx, 3) * lam.inverse(), triv, triv, 1, 4});
  CHECK(d.central() == I(ctx, 1));
  const IntegralDiagram id = integral_structure(d);
  CHECK(check_integral(id).all_passed());
  for (int v : {1, 2, 3}) {
    const IntegralDiagram dx = deform_integral(id, I(ctx, 1) + FieldElement::uniformizer(ctx).pow(v));
    for (int b = 0; b <= v; ++b) CHECK(compare_mod(dx, id, b));
    CHECK_FALSE(compare_mod(dx, id, v + 1));
  }
}
