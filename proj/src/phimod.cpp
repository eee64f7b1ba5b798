#include "padicdiag/phimod.hpp"

#include <bit>

namespace padicdiag {

namespace {

FieldElement p_elt(const FieldContext& ctx) { return FieldElement::from_int(ctx, static_cast<int64_t>(ctx.p())); }

Valuation sub(const Valuation& a, const Valuation& b) {
  return Valuation::of(a.num * b.den - b.num * a.den, a.den * b.den);
}

}  // namespace

PhiModule make_phimod(int k, const FieldElement& a_p) {
  if (k < 2) throw InvalidArgument("weight k must be at least 2");
  const bool in_ideal = a_p.is_zero() ? a_p.abs_precision() >= 1 : a_p.ord() >= 1;
  if (!in_ideal)
    throw InvalidArgument("a_p must lie in the maximal ideal, got valuation " + a_p.valuation().to_string());
  const FieldContext& ctx = a_p.context();
  PhiModule d;
  d.k = k;
  d.a_p = a_p;
  d.phi = zero_matrix(ctx, 2, 2);
  d.phi(1, 0) = p_elt(ctx).pow(k - 1);
  d.phi(0, 1) = -FieldElement::one(ctx);
  d.phi(1, 1) = a_p;
  return d;
}

Polygons polygons(const PhiModule& d) {
  Polygons out;
  out.hodge = {Valuation::of(0, 1), Valuation::of(d.k - 1, 1)};
  const Valuation half = Valuation::of(d.k - 1, 2);
  const Valuation v = d.a_p.is_zero() ? Valuation::infinity() : d.a_p.valuation();
  if (v < half)
    out.newton = {v, sub(Valuation::of(d.k - 1, 1), v)};
  else
    out.newton = {half, half};
  return out;
}

std::optional<FieldElement> square_root(const FieldElement& x) {
  const FieldContext& ctx = x.context();
  if (ctx.p() == 2) throw InvalidArgument("square roots need p odd");
  if (x.is_zero()) return x;
  const int64_t o = x.ord();
  if (o % 2 != 0) return std::nullopt;
  const FieldElement pi = FieldElement::uniformizer(ctx);
  const FieldElement u = x / pi.pow(o);
  // residue field search
  const int f = ctx.f_res();
  const uint64_t p = ctx.p();
  uint64_t count = 1;
  for (int i = 0; i < f; ++i) count *= p;
  std::optional<FieldElement> y;
  for (uint64_t idx = 1; idx < count && !y; ++idx) {
    std::vector<int64_t> coeffs;
    for (uint64_t t = idx; coeffs.size() < static_cast<size_t>(f); t /= p) coeffs.push_back(static_cast<int64_t>(t % p));
    const FieldElement r = f == 1 ? FieldElement::from_int(ctx, coeffs[0]) : FieldElement::from_poly(ctx, coeffs);
    const FieldElement diff = r * r - u;
    if (diff.is_zero() || diff.ord() >= 1) y = r;
  }
  if (!y) return std::nullopt;
  const FieldElement half = FieldElement::from_rational(ctx, 1, 2);
  const int rounds = 8 + 2 * static_cast<int>(std::bit_width(static_cast<unsigned>(ctx.precision())));
  for (int i = 0; i < rounds; ++i) *y = (*y + u / *y) * half;
  return *y * pi.pow(o / 2);
}

bool weak_admissibility(const PhiModule& d) {
  const Polygons pg = polygons(d);
  // totals: both equal k - 1 (val det phi)
  const Valuation total = Valuation::of(pg.newton[0].num * pg.newton[1].den + pg.newton[1].num * pg.newton[0].den,
                                        pg.newton[0].den * pg.newton[1].den);
  if (!(total == Valuation::of(d.k - 1, 1))) return false;
  const FieldContext& ctx = d.context();
  const FieldElement det = p_elt(ctx).pow(d.k - 1);
  const FieldElement disc = d.a_p * d.a_p - det * FieldElement::from_int(ctx, 4);
  const auto root = square_root(disc);
  if (!root) return true;  // no phi-stable line over L
  const FieldElement half = FieldElement::from_rational(ctx, 1, 2);
  for (const FieldElement& mu : {(d.a_p + *root) * half, (d.a_p - *root) * half}) {
    // the eigenline of mu is spanned by (1, -mu); it is L e1 only for mu = 0
    const int t_h = mu.is_zero() ? d.k - 1 : 0;
    if (!mu.is_zero() && mu.valuation() < Valuation::of(t_h, 1)) return false;
  }
  return true;
}

bool frobenius_semisimple(const PhiModule& d) {
  const FieldContext& ctx = d.context();
  const FieldElement disc = d.a_p * d.a_p - p_elt(ctx).pow(d.k - 1) * FieldElement::from_int(ctx, 4);
  return !disc.is_zero();
}

std::string ReductionType::to_string() const {
  if (kind == ReductionKind::Irreducible) return "irreducible";
  return "split principal series (" + character_labels.at(0) + " + " + character_labels.at(1) + ") x omega^" +
         std::to_string(twist_exponent);
}

int blz_threshold(uint64_t p, int k) {
  if (k < 2) throw InvalidArgument("weight k must be at least 2");
  return (k - 2) / static_cast<int>(p - 1);
}

ReductionType blz_reduction_type(uint64_t p, int k, const Valuation& val_ap) {
  if (p <= 2 || !is_prime(p)) throw DomainError("the reduction dichotomy needs an odd prime p");
  const int m = blz_threshold(p, k);
  if (!(Valuation::of(m, 1) < val_ap))
    throw DomainError("val(a_p) = " + val_ap.to_string() + " must exceed m = " + std::to_string(m));
  ReductionType t;
  if ((k - 1) % static_cast<int>(p + 1) != 0) return t;
  t.kind = ReductionKind::SplitPrincipalSeries;
  t.twist_exponent = (k - 1) / static_cast<int>(p + 1);
  t.character_labels = {"mu_{sqrt(-1)}", "mu_{-sqrt(-1)}"};
  return t;
}

int congruence_precision(int n, int e, int k, uint64_t p) {
  if (e < 1) throw InvalidArgument("ramification index must be positive");
  const int m = blz_threshold(p, k);
  if (n < e * m) throw DomainError("n = " + std::to_string(n) + " is below e m = " + std::to_string(e * m));
  return n - e * m;
}

const FieldContext& weight_field(uint64_t p, int k, int digits) {
  if (k % 2 == 1) return make_field(p, "trivial", digits);
  return make_field(p, "x^2-" + std::to_string(p), 2 * digits);
}

FieldElement weight_lambda(const FieldContext& ctx, int k, int sign) {
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
  if ((k - 1) * ctx.e() % 2 != 0)
    throw DomainError("p^{(k-1)/2} does not lie in " + ctx.description() + " for k = " + std::to_string(k));
  const FieldElement l = FieldElement::uniformizer(ctx).pow(static_cast<int64_t>((k - 1) * ctx.e() / 2));
  // pi^e is p times a unit; correct the unit so that l^2 = p^{k-1} exactly
  const FieldElement target = p_elt(ctx).pow(k - 1);
  const auto ratio = square_root(target / (l * l));
  if (!ratio) throw DomainError("p^{(k-1)/2} is not in the field");
  FieldElement out = l * *ratio;
  if ((*ratio - FieldElement::one(ctx)).ord_lower_bound() < 1) out = -out;
  return sign < 0 ? -out : out;
}

std::vector<ApproximationStep> approximation_sequence(const FieldContext& ctx, int k, int sign, int a,
                                                      const std::vector<FieldElement>& xs) {
  if (ctx.p() <= 2) throw DomainError("p must be odd");
  const FieldElement lambda = weight_lambda(ctx, k, sign);
  const FieldElement a_p = lambda * FieldElement::from_int(ctx, 2);
  const int m = blz_threshold(ctx.p(), k);
  const Valuation half = Valuation::of(k - 1, 2);
  std::vector<ApproximationStep> out;
  for (size_t j = 0; j < xs.size(); ++j) {
    const FieldElement& x = xs[j];
    if (x == FieldElement::one(ctx)) throw InvalidArgument("x_j = 1 is not allowed");
    ApproximationStep s;
    s.j = static_cast<int>(j);
    s.x = x;
    s.a_p = lambda * (x + x.inverse());
    s.bound = a + s.j + ctx.e() * m;
    const FieldElement diff = a_p - s.a_p;
    if (diff.is_zero()) {
      if (diff.abs_precision() < s.bound) throw PrecisionError("cannot certify the congruence at j = " + std::to_string(j));
      s.measured = diff.abs_precision();
    } else {
      s.measured = diff.ord();
    }
    s.congruence_ok = s.measured >= s.bound;
    s.valuation_ok = !s.a_p.is_zero() && s.a_p.valuation() == half;
    s.x_nontrivial = !(x * x == FieldElement::one(ctx));
    out.push_back(s);
  }
  return out;
}

std::vector<ApproximationStep> approximation_sequence(uint64_t p, int k, int sign, int a, int j_max, int digits) {
  if (a < 1) throw InvalidArgument("a must be positive");
  if (j_max < 0) throw InvalidArgument("j_max must be non-negative");
  const FieldContext& ctx = weight_field(p, k, digits);
  const FieldElement pi = FieldElement::uniformizer(ctx);
  std::vector<FieldElement> xs;
  for (int j = 0; j <= j_max; ++j) xs.push_back(FieldElement::one(ctx) + pi.pow(static_cast<int64_t>(ctx.e()) * (a + j)));
  return approximation_sequence(ctx, k, sign, a, xs);
}

}  // namespace padicdiag
