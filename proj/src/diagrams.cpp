#include "padicdiag/diagrams.hpp"

#include <random>

namespace padicdiag {

namespace {

ExactMatrix kron_identity(const ExactMatrix& a, size_t n) { return a.kron(identity_matrix(a.zero().context(), n)); }

ExactMatrix scale_first_nonzero(ExactMatrix v) {
  for (size_t j = 0; j < v.cols(); ++j) {
    size_t i = 0;
    while (i < v.rows() && v(i, j).is_zero()) ++i;
    if (i == v.rows()) throw InternalError("zero vector in an invariant basis");
    const FieldElement s = v(i, j).inverse();
    for (size_t t = 0; t < v.rows(); ++t)
      if (!v(t, j).is_exact_zero()) v(t, j) = v(t, j) * s;
  }
  return v;
}

bool is_zero_mod(const ExactMatrix& coords, int64_t b) {
  for (size_t i = 0; i < coords.rows(); ++i)
    for (size_t j = 0; j < coords.cols(); ++j) {
      const FieldElement& v = coords(i, j);
      if (v.is_zero()) {
        if (v.abs_precision() < b) throw PrecisionError("cannot decide a congruence mod pi^" + std::to_string(b));
        continue;
      }
      if (v.ord_lower_bound() < b) return false;
    }
  return true;
}

bool lattice_stable(const Lattice& l, const ExactMatrix& g) { return l.contains(g * l.basis()); }

bool lattices_equal(const Lattice& a, const Lattice& b) {
  return lattice_compare(a, b).relation == Containment::Equal;
}

QMatrix2 random_iwahori(std::mt19937_64& rng, uint64_t p, int level) {
  const int64_t m = static_cast<int64_t>(power_of(p, level));
  std::uniform_int_distribution<int64_t> dist(-m, m);
  for (;;) {
    const int64_t a = dist(rng), b = dist(rng), c = dist(rng) * static_cast<int64_t>(p), d = dist(rng);
    const QMatrix2 g{a, b, c, d};
    if (g.in_gl2_zp(p)) return g;
  }
}

}  // namespace

// ------------------------------------------------------------- construction

Diagram Diagram::build_principal(const DiagramSpec& spec) {
  if (spec.lambda1.is_zero() || spec.lambda2.is_zero()) throw InvalidArgument("lambda1 and lambda2 must be nonzero");
  if (spec.k < 2) throw InvalidArgument("weight k must be at least 2");
  if (spec.c < 1) throw InvalidArgument("level c must be at least 1");
  const FieldContext& ctx = spec.lambda1.context();
  if (&spec.lambda2.context() != &ctx || &spec.theta1.context() != &ctx || &spec.theta2.context() != &ctx)
    throw InvalidArgument("diagram data live in different fields");
  if (ctx.precision() < spec.c + 1) throw PrecisionError("working precision must be at least c + 1");
  const uint64_t p = ctx.p();
  Diagram d(spec, InducedRepresentation(spec.theta1, spec.theta2, p, spec.c));
  const InducedRepresentation& ind = d.ind_;
  const CosetSpace& cs = ind.cosets();
  const int c = spec.c;

  // D1 = I_c-invariants, split by the Iwahori side of the support
  std::vector<size_t> side_one, side_s;
  for (size_t l = 0; l < cs.size(); ++l)
    (iwahori_side(cs.representative(l)) == IwahoriSide::One ? side_one : side_s).push_back(l);
  std::vector<ExactMatrix> ic;
  for (const auto& g : subgroup_generators(p, c, Subgroup::Im, c)) ic.push_back(ind.matrix(g));
  auto invariants_on = [&](const std::vector<size_t>& idx) {
    std::vector<ExactMatrix> sub;
    for (const auto& m : ic) {
      ExactMatrix s = zero_matrix(ctx, idx.size(), idx.size());
      for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = 0; j < idx.size(); ++j) s(i, j) = m(idx[i], idx[j]);
      sub.push_back(s);
    }
    const ExactMatrix k = scale_first_nonzero(fixed_space(sub));
    ExactMatrix full = zero_matrix(ctx, cs.size(), k.cols());
    for (size_t i = 0; i < idx.size(); ++i)
      for (size_t j = 0; j < k.cols(); ++j) full(idx[i], j) = k(i, j);
    return full;
  };
  const ExactMatrix v1 = invariants_on(side_one);
  const ExactMatrix vs = invariants_on(side_s);
  d.v1_base_ = v1.cols();
  d.d1_base_ = v1.hstack(vs);

  // Pi on D1: [Pi f1](s g) = lambda1 f1(Pi^-1 g Pi), [Pi fs](g) = lambda2 fs(s Pi g Pi^-1), g in I
  const size_t n1 = d.d1_base_.cols();
  ExactMatrix images = zero_matrix(ctx, cs.size(), n1);
  for (size_t col = 0; col < n1; ++col) {
    const ExactMatrix f = d.d1_base_.column(col);
    if (col < d.v1_base_) {
      for (size_t l : side_s) {
        const FiniteMatrix rho = cs.representative(l);
        const int64_t u = static_cast<int64_t>(rho.c()), v = static_cast<int64_t>(rho.d());
        // rho = j s g with g = [[u, v], [0, 1]] in I
        const FiniteMatrix sg(p, c, 0, 1, u, v);
        const FiniteMatrix j = rho * sg.inverse();
        if (!subgroup_membership(j, Subgroup::Jc, c)) throw InternalError("coset factor outside J_c");
        const FiniteMatrix conj(p, c, 1, 0, static_cast<int64_t>(p) * v, u);
        images(l, col) = ind.theta(j) * spec.lambda1 * ind.evaluate(f, conj);
      }
    } else {
      for (size_t l : side_one) {
        const FiniteMatrix rho = cs.representative(l);
        const int64_t t = static_cast<int64_t>(rho.c() / p);
        images(l, col) = spec.lambda2 * ind.evaluate(f, FiniteMatrix(p, c, 0, 1, 1, t));
      }
    }
  }
  auto pib = solve(d.d1_base_, images);
  if (!pib) throw InternalError("Pi does not preserve the I_c-invariants");
  d.pi_base_ = *pib;

  const size_t w = d.w_dim();
  d.r_ = kron_identity(d.d1_base_, w);
  d.pi_ = d.pi_base_.kron(sym_power_matrix(ctx, spec.k, QMatrix2::pi(p)));
  d.central_ = spec.lambda1 * spec.lambda2 * FieldElement::from_int(ctx, static_cast<int64_t>(p)).pow(spec.k - 2);
  d.compute_left_inverse();

  const AxiomReport rep = check_diagram_axioms(d, 8, 1);
  if (!rep.all_passed()) {
    std::string msg = "diagram axioms fail:";
    for (const auto& ch : rep.checks)
      if (!ch.passed) msg += " " + ch.name + " (" + ch.detail + ")";
    throw InternalError(msg);
  }
  return d;
}

void Diagram::compute_left_inverse() {
  rows_.clear();
  const RowEchelon ech = row_echelon(r_.transpose());
  rows_ = ech.pivots;
  ExactMatrix sub = zero_matrix(context(), rows_.size(), r_.cols());
  for (size_t i = 0; i < rows_.size(); ++i)
    for (size_t j = 0; j < r_.cols(); ++j) sub(i, j) = r_(rows_[i], j);
  r_rows_inv_ = rows_.size() == r_.cols() ? inverse(sub) : ExactMatrix();
}

ExactMatrix Diagram::action0(const QMatrix2& g) const {
  const FieldContext& ctx = context();
  if (g.det() == 0) throw DomainError("singular group element");
  const int64_t v = padic_val(g.det(), p());
  if (v % 2 != 0) throw DomainError("element outside KZ: " + g.to_string());
  const int64_t z = v / 2;
  const QMatrix2 k0 = g.scaled(p_power(p(), -z));
  if (!k0.in_gl2_zp(p())) throw DomainError("element outside KZ: " + g.to_string());
  ExactMatrix m = ind_.matrix(k0.reduce(p(), level())).kron(sym_power_matrix(ctx, spec_.k, k0));
  if (z != 0) m = m.scaled(central_.pow(z));
  return m;
}

ExactMatrix Diagram::restrict_to_d1(const ExactMatrix& a0) const {
  if (r_rows_inv_.rows() == 0) throw DomainError("r is not injective");
  const ExactMatrix img = a0 * r_;
  ExactMatrix sub = zero_matrix(context(), rows_.size(), img.cols());
  for (size_t i = 0; i < rows_.size(); ++i)
    for (size_t j = 0; j < img.cols(); ++j) sub(i, j) = img(rows_[i], j);
  return r_rows_inv_ * sub;
}

ExactMatrix Diagram::action1(const QMatrix2& g) const {
  if (g.det() == 0) throw DomainError("singular group element");
  const int64_t v = padic_val(g.det(), p());
  const int e = static_cast<int>(((v % 2) + 2) % 2);
  const int64_t z = (v - e) / 2;
  QMatrix2 i = g.scaled(p_power(p(), -z));
  if (e == 1) i = QMatrix2::pi(p()).inverse() * i;
  if (!i.in_gl2_zp(p()) || (i.c != 0 && padic_val(i.c, p()) < 1))
    throw DomainError("element outside the normalizer of I: " + g.to_string());
  ExactMatrix m = restrict_to_d1(action0(i));
  if (e == 1) m = pi_ * m;
  if (z != 0) m = m.scaled(central_.pow(z));
  return m;
}

ExactMatrix Diagram::u1() const {
  const ExactMatrix id = identity_matrix(context(), dim1());
  return id.block(0, 0, dim1(), dim_v1());
}

ExactMatrix Diagram::u2() const {
  const ExactMatrix id = identity_matrix(context(), dim1());
  return id.block(0, dim_v1(), dim1(), dim_vs());
}

Diagram Diagram::with_pi(const ExactMatrix& pi) const {
  if (pi.rows() != dim1() || pi.cols() != dim1()) throw InvalidArgument("Pi matrix has the wrong size");
  Diagram d = *this;
  d.pi_ = pi;
  return d;
}

Diagram Diagram::with_r(const ExactMatrix& r) const {
  if (r.rows() != dim0() || r.cols() != dim1()) throw InvalidArgument("r has the wrong size");
  Diagram d = *this;
  d.r_ = r;
  d.compute_left_inverse();
  return d;
}

// ------------------------------------------------------------------- axioms

bool AxiomReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

AxiomReport check_diagram_axioms(const Diagram& d, int samples, uint64_t seed) {
  const FieldContext& ctx = d.context();
  const uint64_t p = d.p();
  AxiomReport rep;
  const ExactMatrix id1 = identity_matrix(ctx, d.dim1());

  CheckResult sq{"pi_squared_central", matrices_equal(d.pi() * d.pi(), id1.scaled(d.central())), ""};
  if (!sq.passed) sq.detail = "Pi^2 differs from " + d.central().to_string() + " * id";
  rep.checks.push_back(sq);

  std::vector<QMatrix2> elems;
  for (const auto& [name, g] : iwahori_generators(p)) elems.push_back(g);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < samples; ++i) elems.push_back(random_iwahori(rng, p, d.level() + 2));

  const size_t r_rank = rank(d.r());
  CheckResult inj{"r_injective", r_rank == d.dim1(), ""};
  if (!inj.passed) inj.detail = "rank " + std::to_string(r_rank) + " < " + std::to_string(d.dim1());
  rep.checks.push_back(inj);

  CheckResult conj{"pi_conjugation", true, ""};
  CheckResult equi{"r_equivariant", true, ""};
  if (!inj.passed) {
    conj = {"pi_conjugation", false, "skipped: r not injective"};
    equi = {"r_equivariant", false, "skipped: r not injective"};
  } else {
    const QMatrix2 pi = QMatrix2::pi(p);
    const QMatrix2 pinv = pi.inverse();
    for (const auto& g : elems) {
      const ExactMatrix a0 = d.action0(g);
      const ExactMatrix a1 = d.restrict_to_d1(a0);
      if (equi.passed && !matrices_equal(d.r() * a1, a0 * d.r())) {
        equi.passed = false;
        equi.detail = "fails at " + g.to_string();
      }
      const ExactMatrix moved = d.restrict_to_d1(d.action0(pi * g * pinv));
      if (conj.passed && !matrices_equal(d.pi() * a1, moved * d.pi())) {
        conj.passed = false;
        conj.detail = "fails at " + g.to_string();
      }
    }
    const QMatrix2 center{mpq_class(p), 0, 0, mpq_class(p)};
    if (equi.passed && !matrices_equal(d.r().scaled(d.central()), d.action0(center) * d.r())) {
      equi.passed = false;
      equi.detail = "central scalar mismatch";
    }
  }
  rep.checks.push_back(conj);
  rep.checks.push_back(equi);
  return rep;
}

// -------------------------------------------------------------- deformation

namespace {

ExactMatrix phi_diagonal(const Diagram& d, const FieldElement& x) {
  ExactMatrix phi = identity_matrix(d.context(), d.dim1());
  for (size_t i = 0; i < d.dim_v1(); ++i) phi(i, i) = x;
  return phi;
}

}  // namespace

Diagram deform_diagram(const Diagram& d, const FieldElement& x) {
  if (!x.is_unit()) throw DomainError("deformation parameter must be a unit");
  const ExactMatrix phi = phi_diagonal(d, x);
  const ExactMatrix phi_inv = phi_diagonal(d, x.inverse());
  return d.with_pi(phi * d.pi() * phi_inv);
}

AxiomReport verify_deformation_isomorphism(const Diagram& d, const FieldElement& x) {
  const Diagram dx = deform_diagram(d, x);
  DiagramSpec spec = d.spec();
  spec.lambda1 = x.inverse() * spec.lambda1;
  spec.lambda2 = x * spec.lambda2;
  const Diagram other = Diagram::build_principal(spec);
  AxiomReport rep;
  rep.checks.push_back({"same_dimensions", dx.dim0() == other.dim0() && dx.dim1() == other.dim1(), ""});
  if (!rep.all_passed()) return rep;
  bool k_ok = true, i_ok = true;
  for (const auto& [name, g] : k_generators(d.p())) k_ok = k_ok && matrices_equal(dx.action0(g), other.action0(g));
  k_ok = k_ok && dx.central() == other.central();
  for (const auto& [name, g] : iwahori_generators(d.p()))
    i_ok = i_ok && matrices_equal(dx.action1(g), other.action1(g));
  rep.checks.push_back({"alpha0_equivariant", k_ok, k_ok ? "" : "K or centre action differs"});
  rep.checks.push_back({"alpha1_iwahori", i_ok, i_ok ? "" : "I action differs"});
  const bool pi_ok = matrices_equal(dx.pi(), other.pi());
  rep.checks.push_back({"alpha1_pi", pi_ok, pi_ok ? "" : "deformed Pi differs from the Pi of the twisted diagram"});
  const bool sq_ok = matrices_equal(dx.r(), other.r());
  rep.checks.push_back({"square_commutes", sq_ok, sq_ok ? "" : "r differs"});
  return rep;
}

// ------------------------------------------------------- integral structure

IntegralDiagram integral_structure(const Diagram& d, int max_iterations) {
  const FieldContext& ctx = d.context();
  if (!d.central().is_unit())
    throw DomainError("central scalar " + d.central().to_string() + " is not a unit; no integral structure");
  std::vector<ExactMatrix> kgens;
  for (const auto& [name, g] : k_generators(d.p())) kgens.push_back(d.action0(g));
  const ExactMatrix pi = d.pi();

  auto close_under_k = [&](Lattice l) {
    for (;;) {
      ExactMatrix gens = l.basis();
      for (const auto& g : kgens) gens = gens.hstack(g * l.basis());
      Lattice next = Lattice::from_generators(gens);
      if (lattices_equal(next, l)) return l;
      l = next;
    }
  };
  // (l cap U1) + (l cap U2): u in U_i lies in l iff (columns of l^{-1} on U_i) u is integral
  auto split_part = [&](const Lattice& l) {
    const ExactMatrix inv = inverse(l.basis());
    const size_t n = inv.cols(), m = d.dim_v1();
    ExactMatrix out = zero_matrix(ctx, n, n);
    out.set_block(0, 0, preimage_lattice(inv.block(0, 0, n, m)));
    out.set_block(m, m, preimage_lattice(inv.block(0, m, n, n - m)));
    return Lattice::from_generators(out);
  };

  Lattice l0 = Lattice::standard(ctx, d.dim0());
  for (int it = 1; it <= max_iterations; ++it) {
    l0 = close_under_k(l0);
    const ExactMatrix inside = preimage_lattice(inverse(l0.basis()) * d.r());
    const Lattice l1 = Lattice::from_generators(inside.hstack(pi * inside));
    const ExactMatrix pushed = d.r() * l1.basis();
    if (l0.contains(pushed)) {
      const Lattice s1 = split_part(l1);
      IntegralDiagram out{d, l0, s1, it, deformation_bound(s1, d.u1(), d.u2())};
      const AxiomReport rep = check_integral(out);
      if (!rep.all_passed()) throw InternalError("integral structure failed its stability checks");
      return out;
    }
    l0 = Lattice::from_generators(l0.basis().hstack(pushed));
  }
  throw DomainError("no stable integral structure within " + std::to_string(max_iterations) + " iterations");
}

AxiomReport check_integral(const IntegralDiagram& x) {
  const Diagram& d = x.diagram;
  AxiomReport rep;
  bool k_ok = x.diagram.central().is_unit();
  for (const auto& [name, g] : k_generators(d.p())) k_ok = k_ok && lattice_stable(x.l0, d.action0(g));
  rep.checks.push_back({"l0_k_stable", k_ok, ""});
  bool i_ok = true;
  for (const auto& [name, g] : iwahori_generators(d.p())) {
    const ExactMatrix a = d.action1(g);
    i_ok = i_ok && lattice_stable(x.l1, a) && lattice_stable(x.l1, inverse(a));
  }
  rep.checks.push_back({"l1_i_stable", i_ok, ""});
  const bool pi_ok = lattice_stable(x.l1, d.pi()) && lattice_stable(x.l1, inverse(d.pi()));
  rep.checks.push_back({"l1_pi_stable", pi_ok, ""});
  rep.checks.push_back({"r_l1_in_l0", x.l0.contains(d.r() * x.l1.basis()), ""});
  return rep;
}

IntegralDiagram deform_integral(const IntegralDiagram& d, const FieldElement& x) {
  const Lattice moved = apply_phi_x(d.l1, x, d.diagram.u1(), d.diagram.u2());
  if (!lattices_equal(moved, d.l1)) throw DomainError("phi_x does not preserve the D1 lattice");
  IntegralDiagram out = d;
  out.diagram = deform_diagram(d.diagram, x);
  return out;
}

bool compare_mod(const IntegralDiagram& x, const IntegralDiagram& y, int b) {
  if (b < 0) throw InvalidArgument("congruence exponent must be non-negative");
  if (b > x.diagram.context().precision()) throw PrecisionError("congruence exponent exceeds the precision");
  if (!lattices_equal(x.l0, y.l0) || !lattices_equal(x.l1, y.l1))
    throw InvalidArgument("compare_mod needs the same lattices on both sides");
  const Diagram& dx = x.diagram;
  const Diagram& dy = y.diagram;
  auto agree = [&](const Lattice& l, const ExactMatrix& a, const ExactMatrix& c) {
    auto coords = l.coordinates((a - c) * l.basis());
    if (!coords) return false;
    return is_zero_mod(*coords, b);
  };
  for (const auto& [name, g] : k_generators(dx.p()))
    if (!agree(x.l0, dx.action0(g), dy.action0(g))) return false;
  const QMatrix2 center{mpq_class(dx.p()), 0, 0, mpq_class(dx.p())};
  if (!agree(x.l0, dx.action0(center), dy.action0(center))) return false;
  for (const auto& [name, g] : iwahori_generators(dx.p()))
    if (!agree(x.l1, dx.action1(g), dy.action1(g))) return false;
  if (!agree(x.l1, dx.pi(), dy.pi())) return false;
  // r: compare images of l1 inside l0
  auto cr = x.l0.coordinates((dx.r() - dy.r()) * x.l1.basis());
  return cr && is_zero_mod(*cr, b);
}

}  // namespace padicdiag
