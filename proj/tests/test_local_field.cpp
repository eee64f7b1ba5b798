#include "doctest.h"

#include <random>

#include "padicdiag/local_field.hpp"

using namespace padicdiag;

namespace {

// Oracle: elements of Q[x]/(f) with exact rational coefficients.
using QPoly = std::vector<mpq_class>;

QPoly qmul(const QPoly& a, const QPoly& b, const std::vector<int64_t>& f) {
  const size_t d = f.size() - 1;
  std::vector<mpq_class> prod(2 * d, 0);
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j) prod[i + j] += a[i] * b[j];
  for (size_t k = 2 * d - 1; k >= d; --k) {
    mpq_class c = prod[k];
    prod[k] = 0;
    for (size_t i = 0; i < d; ++i) prod[k - d + i] -= c * f[i];
  }
  prod.resize(d);
  return prod;
}

QPoly qadd(const QPoly& a, const QPoly& b, int sign = 1) {
  QPoly r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + sign * b[i];
  return r;
}

FieldElement embed(const FieldContext& ctx, const QPoly& q) {
  FieldElement acc = FieldElement::zero(ctx);
  FieldElement x = FieldElement::generator(ctx);
  FieldElement pw = FieldElement::one(ctx);
  for (size_t i = 0; i < q.size(); ++i) {
    if (q[i] != 0) acc += FieldElement::from_rational(ctx, q[i]) * pw;
    pw = pw * x;
  }
  return acc;
}

// Reduction of an integral rational polynomial coefficientwise.
Coeffs oracle_reduce(const FieldContext& ctx, const QPoly& q, int n) {
  Coeffs out{};
  for (int i = 0; i < ctx.degree(); ++i) {
    const int digits = ctx.coeff_digits(i, n);
    mpz_class mod;
    mpz_ui_pow_ui(mod.get_mpz_t(), ctx.p(), static_cast<unsigned long>(digits));
    mpz_class inv;
    REQUIRE(mpz_invert(inv.get_mpz_t(), q[static_cast<size_t>(i)].get_den_mpz_t(), mod.get_mpz_t()) != 0);
    mpz_class v = q[static_cast<size_t>(i)].get_num() * inv;
    mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), mod.get_mpz_t());
    out[static_cast<size_t>(i)] = v.get_ui();
  }
  return out;
}

QPoly random_qpoly(std::mt19937_64& rng, size_t d, uint64_t p) {
  std::uniform_int_distribution<int> coef(-40, 40);
  std::uniform_int_distribution<int> shift(0, 2);
  QPoly q(d);
  const int k = shift(rng);
  mpz_class pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), p, static_cast<unsigned long>(k));
  for (auto& c : q) c = mpq_class(coef(rng)) * mpq_class(pk);
  return q;
}

bool has_root_mod3(const std::vector<int>& f) {
  for (int r = 0; r < 3; ++r) {
    int acc = 0;
    for (size_t i = f.size(); i-- > 0;) acc = (acc * r + f[i]) % 3;
    if (acc == 0) return true;
  }
  return false;
}

// Brute force over F_3: a monic polynomial of degree <= 3 is irreducible iff
// it has no root; degree 4 additionally must avoid a product of two monic quadratics.
bool irreducible_mod3(const std::vector<int>& f) {
  if (has_root_mod3(f)) return false;
  if (f.size() - 1 < 4) return true;
  for (int a0 = 0; a0 < 3; ++a0)
    for (int a1 = 0; a1 < 3; ++a1)
      for (int b0 = 0; b0 < 3; ++b0)
        for (int b1 = 0; b1 < 3; ++b1) {
          const int c[5] = {a0 * b0 % 3, (a0 * b1 + a1 * b0) % 3, (a0 + b0 + a1 * b1) % 3, (a1 + b1) % 3, 1};
          bool same = true;
          for (int i = 0; i < 5; ++i) same = same && c[i] == f[static_cast<size_t>(i)];
          if (same) return false;
        }
  return true;
}

}  // namespace

TEST_CASE("make_field classifies extensions") {
  const auto& q3 = make_field(3, "trivial", 8);
  CHECK(q3.e() == 1);
  CHECK(q3.f_res() == 1);
  CHECK(q3.kind() == ExtensionKind::Trivial);

  const auto& ram = make_field(3, "x^2-3", 8);
  CHECK(ram.e() == 2);
  CHECK(ram.f_res() == 1);

  const auto& unr = make_field(3, "x^2+1", 8);
  CHECK(unr.e() == 1);
  CHECK(unr.f_res() == 2);

  CHECK(&make_field(3, "x^2-3", 8) == &ram);
}

TEST_CASE("make_field rejects bad input") {
  CHECK_THROWS_AS(make_field(2, "trivial", 8), InvalidArgument);
  CHECK_THROWS_AS(make_field(9, "trivial", 8), InvalidArgument);
  CHECK_THROWS_AS(make_field(3, "x^2-1", 8), InvalidArgument);
  CHECK_THROWS_AS(make_field(3, "trivial", 0), InvalidArgument);
  CHECK_THROWS_AS(make_field(3, "x^5-3", 4), InvalidArgument);
  CHECK_THROWS_AS(make_field(3, "trivial", 200), InvalidArgument);
  try {
    make_field(2, "trivial", 4);
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("p > 2") != std::string::npos);
  }
}

TEST_CASE("unramified classification agrees with brute force over F_3") {
  for (int deg = 2; deg <= 4; ++deg) {
    int total = 1;
    for (int i = 0; i < deg; ++i) total *= 3;
    for (int code = 0; code < total; ++code) {
      std::vector<int> f(static_cast<size_t>(deg) + 1, 0);
      f[static_cast<size_t>(deg)] = 1;
      int c = code;
      for (int i = 0; i < deg; ++i, c /= 3) f[static_cast<size_t>(i)] = c % 3;
      // lift with constant term shifted by 3*... never Eisenstein because we
      // skip lifts whose lower coefficients all vanish mod 3
      bool all_zero = true;
      for (int i = 0; i < deg; ++i) all_zero = all_zero && f[static_cast<size_t>(i)] == 0;
      if (all_zero) continue;
      std::vector<int64_t> lifted(f.begin(), f.end());
      bool accepted = true;
      try {
        const auto& ctx = make_field(3, lifted, 4);
        CHECK(ctx.kind() == ExtensionKind::Unramified);
        CHECK(ctx.f_res() == deg);
      } catch (const InvalidArgument&) {
        accepted = false;
      }
      CHECK(accepted == irreducible_mod3(f));
    }
  }
}

TEST_CASE("basic arithmetic examples") {
  const auto& q3 = make_field(3, "trivial", 8);
  auto one = FieldElement::from_int(q3, 1);
  auto two = FieldElement::from_int(q3, 2);
  auto s = one + two;
  CHECK(s.ord() == 1);
  CHECK(s == FieldElement::from_int(q3, 3));

  const auto& ram = make_field(3, "x^2-3", 8);
  auto pi = FieldElement::uniformizer(ram);
  auto sq = pi * pi;
  CHECK(sq.ord() == 2);
  CHECK(sq == FieldElement::from_int(ram, 3));

  const auto& q3n4 = make_field(3, "trivial", 4);
  auto four = FieldElement::from_int(q3n4, 4);
  auto inv = four.inverse();
  CHECK(inv.ord() == 0);
  // 4 * 61 = 244 = 1 + 3 * 81
  CHECK(reduce_mod(inv, 4).coefficients()[0] == 61);
  CHECK(four * inv == FieldElement::one(q3n4));
}

TEST_CASE("valuation examples") {
  const auto& q3 = make_field(3, "trivial", 8);
  CHECK(FieldElement::from_int(q3, 3).valuation() == Valuation::of(1, 1));
  CHECK(FieldElement::zero(q3).valuation().infinite);
  CHECK(FieldElement::from_int(q3, 18).valuation() == Valuation::of(2, 1));
  const auto& ram = make_field(3, "x^2-3", 8);
  CHECK(FieldElement::uniformizer(ram).valuation() == Valuation::of(1, 2));
  CHECK(FieldElement::from_int(ram, 3).valuation() == Valuation::of(1, 1));
  CHECK(FieldElement::uniformizer(ram).pow(3).valuation() == Valuation::of(3, 2));
  CHECK(FieldElement::from_rational(q3, 1, 3).valuation() == Valuation::of(-1, 1));
}

TEST_CASE("reduce_mod examples") {
  const auto& q3 = make_field(3, "trivial", 8);
  CHECK(reduce_mod(FieldElement::from_int(q3, 12), 1).is_zero());
  CHECK(reduce_mod(FieldElement::from_int(q3, 4), 2).coefficients()[0] == 4);
  auto x = FieldElement::from_int(q3, 10);
  auto r = reduce_mod(x + x.inverse(), 2);
  CHECK(r.coefficients()[0] == 2);
  CHECK_THROWS_AS(reduce_mod(FieldElement::from_rational(q3, 1, 3), 1), DomainError);
  CHECK_THROWS_AS(reduce_mod(x, 9), InvalidArgument);
}

TEST_CASE("precision is tracked through cancellation") {
  const auto& q3 = make_field(3, "trivial", 6);
  auto a = FieldElement::from_int(q3, 1);
  auto z = a - a;
  CHECK(z.is_zero());
  CHECK_FALSE(z.is_exact_zero());
  CHECK(z.abs_precision() == 6);
  CHECK_THROWS_AS(z.ord(), PrecisionError);
  CHECK_THROWS_AS(z.inverse(), PrecisionError);
  CHECK_THROWS_AS(FieldElement::zero(q3).inverse(), DivisionByZero);
  auto b = FieldElement::from_int(q3, 1 + 81);
  auto d = b - a;
  CHECK(d.ord() == 4);
  CHECK(d.rel_precision() == 2);
}

TEST_CASE("ring operations agree with exact rational arithmetic") {
  std::mt19937_64 rng(20240601);
  const std::vector<std::pair<std::string, int>> fields = {
      {"trivial", 6}, {"trivial", 10}, {"x^2-3", 8}, {"x^2+1", 6}, {"x^2-3*x+3", 7}, {"x^3-x+1", 5}};
  for (const auto& [poly, n] : fields) {
    const auto& ctx = make_field(3, poly, n);
    const auto f = ctx.defining_poly();
    const size_t d = static_cast<size_t>(ctx.degree());
    for (int trial = 0; trial < 60; ++trial) {
      INFO(poly, " trial ", trial);
      QPoly qa = random_qpoly(rng, d, 3), qb = random_qpoly(rng, d, 3), qc = random_qpoly(rng, d, 3);
      auto a = embed(ctx, qa), b = embed(ctx, qb), c = embed(ctx, qc);
      QPoly qexpr = qmul(qadd(qa, qb), qc, f);
      auto expr = (a + b) * c;
      if (!expr.is_zero()) {
        CHECK(reduce_mod(expr, n).coefficients() == oracle_reduce(ctx, qexpr, n));
      }
      QPoly qdiff = qadd(qmul(qa, qb, f), qc, -1);
      auto diff = a * b - c;
      CHECK(reduce_mod(diff, n).coefficients() == oracle_reduce(ctx, qdiff, n));
      CHECK((a * b) == (b * a));
      CHECK_MESSAGE(((a + b) + c) == (a + (b + c)), a.to_string(), " ", b.to_string(), " ", c.to_string(), " -> ", ((a + b) + c).to_string(), " vs ", (a + (b + c)).to_string());
      CHECK((a * (b + c)) == (a * b + a * c));
      if (!a.is_zero()) {
        CHECK(a * a.inverse() == FieldElement::one(ctx));
        CHECK((b / a) * a == b);
      }
    }
  }
}

TEST_CASE("valuation laws") {
  std::mt19937_64 rng(7);
  for (const char* poly : {"trivial", "x^2-3", "x^2+1"}) {
    const auto& ctx = make_field(3, poly, 8);
    for (int trial = 0; trial < 50; ++trial) {
      auto a = embed(ctx, random_qpoly(rng, static_cast<size_t>(ctx.degree()), 3));
      auto b = embed(ctx, random_qpoly(rng, static_cast<size_t>(ctx.degree()), 3));
      if (a.is_zero() || b.is_zero()) continue;
      CHECK((a * b).ord() == a.ord() + b.ord());
      auto s = a + b;
      if (a.ord() != b.ord()) {
        CHECK(s.ord() == std::min(a.ord(), b.ord()));
      } else if (!s.is_zero()) {
        CHECK(s.ord() >= a.ord());
      }
    }
  }
}

TEST_CASE("reduction is a ring homomorphism") {
  std::mt19937_64 rng(11);
  for (const char* poly : {"trivial", "x^2-3", "x^2+1"}) {
    const auto& ctx = make_field(3, poly, 8);
    for (int n = 1; n <= 8; ++n) {
      auto a = embed(ctx, random_qpoly(rng, static_cast<size_t>(ctx.degree()), 3));
      auto b = embed(ctx, random_qpoly(rng, static_cast<size_t>(ctx.degree()), 3));
      CHECK(reduce_mod(a + b, n) == reduce_mod(a, n) + reduce_mod(b, n));
      CHECK(reduce_mod(a * b, n) == reduce_mod(a, n) * reduce_mod(b, n));
      CHECK(reduce_mod(reduce_mod(a, n).lift(), n) == reduce_mod(a, n));
    }
  }
}

TEST_CASE("x + 1/x is a unit for x in 1 + p_L") {
  std::mt19937_64 rng(3);
  for (const char* poly : {"trivial", "x^2-3", "x^2+1"}) {
    const auto& ctx = make_field(3, poly, 10);
    auto pi = FieldElement::uniformizer(ctx);
    for (int trial = 0; trial < 30; ++trial) {
      auto t = embed(ctx, random_qpoly(rng, static_cast<size_t>(ctx.degree()), 3));
      auto x = FieldElement::one(ctx) + pi * t;
      CHECK((x + x.inverse()).ord() == 0);
    }
  }
}

TEST_CASE("parse_polynomial") {
  CHECK(parse_polynomial("x^2-3") == std::vector<int64_t>{-3, 0, 1});
  CHECK(parse_polynomial("x^3 - x + 1") == std::vector<int64_t>{1, -1, 0, 1});
  CHECK(parse_polynomial("x^2-3*x+3") == std::vector<int64_t>{3, -3, 1});
  CHECK_THROWS_AS(parse_polynomial("x^"), InvalidArgument);
  CHECK_THROWS_AS(parse_polynomial("y+1"), InvalidArgument);
}
