#include "padicdiag/smooth_reps.hpp"

namespace padicdiag {

namespace {

constexpr uint64_t kMaxTable = 1u << 22;

FieldElement fe(const FieldContext& ctx, const mpq_class& q) { return FieldElement::from_rational(ctx, q); }

}  // namespace

// ---------------------------------------------------------------- characters

SmoothCharacter SmoothCharacter::make(const FieldElement& value_at_p, int conductor,
                                      const FieldElement& theta_at_generator) {
  if (value_at_p.is_zero()) throw InvalidArgument("chi(p) must be nonzero");
  if (conductor < 0) throw InvalidArgument("conductor must be non-negative");
  const FieldContext& ctx = value_at_p.context();
  if (&theta_at_generator.context() != &ctx) throw InvalidArgument("character data in different fields");
  SmoothCharacter ch;
  ch.value_at_p_ = value_at_p;
  ch.conductor_ = conductor;
  ch.theta_gen_ = theta_at_generator;
  const uint64_t p = ctx.p();
  ch.modulus_ = power_of(p, conductor);
  if (ch.modulus_ > kMaxTable) throw InvalidArgument("conductor too large for the discrete log table");
  if (conductor == 0) {
    if (!(theta_at_generator == FieldElement::one(ctx)))
      throw InvalidArgument("a character of conductor 0 must be trivial on units");
    return ch;
  }
  const uint64_t order = ch.modulus_ / p * (p - 1);
  if (!theta_at_generator.is_unit() || !(theta_at_generator.pow(static_cast<int64_t>(order)) == FieldElement::one(ctx)))
    throw InvalidArgument("theta value is not a root of unity of order dividing " + std::to_string(order));
  ch.table_.assign(ch.modulus_, FieldElement::zero(ctx));
  const uint64_t g = primitive_root(p) % ch.modulus_;
  uint64_t x = 1;
  FieldElement v = FieldElement::one(ctx);
  for (uint64_t i = 0; i < order; ++i) {
    ch.table_[x] = v;
    x = static_cast<uint64_t>(static_cast<unsigned __int128>(x) * g % ch.modulus_);
    v = v * theta_at_generator;
  }
  return ch;
}

SmoothCharacter SmoothCharacter::unramified(const FieldElement& value_at_p) {
  return make(value_at_p, 0, FieldElement::one(value_at_p.context()));
}

FieldElement SmoothCharacter::on_unit(uint64_t u) const {
  if (u % context().p() == 0) throw DomainError("theta evaluated at a non-unit");
  if (conductor_ == 0) return FieldElement::one(context());
  return table_[u % modulus_];
}

FieldElement SmoothCharacter::operator()(const mpq_class& x) const {
  if (x == 0) throw DomainError("character evaluated at zero");
  const uint64_t p = context().p();
  const int64_t v = padic_val(x, p);
  mpq_class unit = x;
  const mpz_class pp(static_cast<unsigned long>(p));
  for (int64_t i = 0; i < v; ++i) unit /= pp;
  for (int64_t i = 0; i < -v; ++i) unit *= pp;
  FieldElement out = value_at_p_.pow(v);
  if (conductor_ > 0) out = out * on_unit(residue_mod(unit, p, conductor_));
  return out;
}

SmoothCharacter SmoothCharacter::with_value_at_p(const FieldElement& v) const {
  SmoothCharacter ch = *this;
  if (v.is_zero()) throw InvalidArgument("chi(p) must be nonzero");
  ch.value_at_p_ = v;
  return ch;
}

// ------------------------------------------------------------------ modules

const ExactMatrix& ModuleWithAction::action(const std::string& name) const {
  for (const auto& [n, m] : generators)
    if (n == name) return m;
  throw InvalidArgument("module has no generator named " + name);
}

std::vector<std::pair<std::string, QMatrix2>> k_generators(uint64_t p) {
  const mpq_class u(static_cast<unsigned long>(primitive_root(p)));
  return {{"e12", {1, 1, 0, 1}}, {"e21", {1, 0, 1, 1}}, {"diag_u1", {u, 0, 0, 1}}, {"diag_1u", {1, 0, 0, u}}};
}

std::vector<std::pair<std::string, QMatrix2>> iwahori_generators(uint64_t p) {
  const mpq_class u(static_cast<unsigned long>(primitive_root(p)));
  const mpq_class pq(static_cast<unsigned long>(p));
  return {{"e12", {1, 1, 0, 1}}, {"e21p", {1, 0, pq, 1}}, {"diag_u1", {u, 0, 0, 1}}, {"diag_1u", {1, 0, 0, u}}};
}

// ---------------------------------------------------------- induced module

InducedRepresentation::InducedRepresentation(const SmoothCharacter& theta1, const SmoothCharacter& theta2, uint64_t p,
                                             int c)
    : theta1_(theta1), theta2_(theta2), cosets_(p, c) {
  if (&theta1.context() != &theta2.context()) throw InvalidArgument("characters in different fields");
  if (theta1.context().p() != p) throw InvalidArgument("characters over a different prime");
  if (theta1.conductor() > c || theta2.conductor() > c)
    throw InvalidArgument("character conductor exceeds the level c = " + std::to_string(c));
}

FieldElement InducedRepresentation::theta(const FiniteMatrix& j) const {
  return theta1_.on_unit(j.a()) * theta2_.on_unit(j.d());
}

ExactMatrix InducedRepresentation::matrix(const FiniteMatrix& g0) const {
  const FiniteMatrix g = g0.reduced(level());
  ExactMatrix m = zero_matrix(context(), dim(), dim());
  // column l' of M(g) holds g . delta_{l'}; its value at rep_l is theta(j) when rep_l g = j rep_{l'}
  for (size_t l = 0; l < dim(); ++l) {
    const auto dec = cosets_.decompose(cosets_.representative(l) * g);
    m(l, dec.index) = theta(dec.j);
  }
  return m;
}

FieldElement InducedRepresentation::evaluate(const ExactMatrix& f, const FiniteMatrix& x) const {
  const auto dec = cosets_.decompose(x.reduced(level()));
  return theta(dec.j) * f(dec.index, 0);
}

ModuleWithAction InducedRepresentation::module(const FieldElement& central) const {
  ModuleWithAction m;
  for (size_t i = 0; i < dim(); ++i) m.basis.push_back("delta" + cosets_.label(i).to_string(p()));
  for (const auto& [name, g] : k_generators(p())) m.generators.emplace_back(name, matrix(g.reduce(p(), level())));
  m.central = central;
  return m;
}

// -------------------------------------------------------------- Sym^{k-2}

ExactMatrix sym_power_matrix(int k, const FieldElement& a, const FieldElement& b, const FieldElement& c,
                             const FieldElement& d) {
  if (k < 2) throw InvalidArgument("weight k must be at least 2");
  const FieldContext& ctx = a.context();
  const size_t n = static_cast<size_t>(k - 2);
  using Poly = std::vector<FieldElement>;  // coefficient of x^{n-i} y^i at index i
  auto mul = [&](const Poly& p, const Poly& q) {
    Poly r(p.size() + q.size() - 1, FieldElement::zero(ctx));
    for (size_t i = 0; i < p.size(); ++i)
      for (size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
  };
  const Poly lx{a, c};  // a x + c y
  const Poly ly{b, d};  // b x + d y
  ExactMatrix m = zero_matrix(ctx, n + 1, n + 1);
  for (size_t j = 0; j <= n; ++j) {
    Poly acc{FieldElement::one(ctx)};
    for (size_t t = 0; t < n - j; ++t) acc = mul(acc, lx);
    for (size_t t = 0; t < j; ++t) acc = mul(acc, ly);
    for (size_t i = 0; i <= n; ++i) m(i, j) = acc[i];
  }
  return m;
}

ExactMatrix sym_power_matrix(const FieldContext& ctx, int k, const QMatrix2& g) {
  return sym_power_matrix(k, fe(ctx, g.a), fe(ctx, g.b), fe(ctx, g.c), fe(ctx, g.d));
}

ModuleWithAction sym_power(const FieldContext& ctx, int k) {
  if (k < 2) throw InvalidArgument("weight k must be at least 2");
  ModuleWithAction m;
  for (int j = 0; j <= k - 2; ++j)
    m.basis.push_back("x^" + std::to_string(k - 2 - j) + "y^" + std::to_string(j));
  for (const auto& [name, g] : k_generators(ctx.p())) m.generators.emplace_back(name, sym_power_matrix(ctx, k, g));
  m.central = FieldElement::from_int(ctx, static_cast<int64_t>(ctx.p())).pow(k - 2);
  return m;
}

ModuleWithAction tensor(const ModuleWithAction& a, const ModuleWithAction& b) {
  ModuleWithAction m;
  for (const auto& x : a.basis)
    for (const auto& y : b.basis) m.basis.push_back(x + "*" + y);
  for (const auto& [name, g] : a.generators) m.generators.emplace_back(name, g.kron(b.action(name)));
  m.central = a.central * b.central;
  return m;
}

Invariants invariants_of(const ModuleWithAction& m, const std::vector<ExactMatrix>& group) {
  Invariants out;
  out.basis = fixed_space(group);
  out.module.central = m.central;
  for (size_t i = 0; i < out.basis.cols(); ++i) out.module.basis.push_back("v" + std::to_string(i));
  for (const auto& [name, g] : m.generators) {
    auto x = solve(out.basis, g * out.basis);
    if (x) out.module.generators.emplace_back(name, *x);
  }
  return out;
}

}  // namespace padicdiag
