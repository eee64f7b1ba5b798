#include "padicdiag/local_field.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

namespace padicdiag {

namespace {

using u128 = unsigned __int128;

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<u128>(a) * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

int vp_u64(uint64_t v, uint64_t p) {
  int k = 0;
  while (v % p == 0) {
    v /= p;
    ++k;
  }
  return k;
}

// Dense polynomials over F_p, low to high, used only for the irreducibility test.
using FpPoly = std::vector<uint64_t>;

void trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

FpPoly fp_mod(FpPoly a, const FpPoly& m, uint64_t p) {
  trim(a);
  const size_t dm = m.size() - 1;
  const uint64_t lead_inv = powmod(m.back(), p - 2, p);
  while (a.size() >= m.size()) {
    const uint64_t c = mulmod(a.back(), lead_inv, p);
    const size_t shift = a.size() - m.size();
    for (size_t i = 0; i <= dm; ++i) {
      a[shift + i] = (a[shift + i] + p - mulmod(c, m[i], p)) % p;
    }
    trim(a);
  }
  return a;
}

FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m, uint64_t p) {
  if (a.empty() || b.empty()) return {};
  FpPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  return fp_mod(r, m, p);
}

FpPoly fp_powmod(FpPoly base, uint64_t e, const FpPoly& m, uint64_t p) {
  FpPoly r{1};
  base = fp_mod(base, m, p);
  while (e) {
    if (e & 1) r = fp_mulmod(r, base, m, p);
    base = fp_mulmod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    FpPoly r = fp_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Rabin's test: f of degree d is irreducible over F_p iff x^{p^d} = x mod f
// and gcd(x^{p^{d/q}} - x, f) = 1 for each prime q | d.
bool fp_irreducible(const FpPoly& f, uint64_t p) {
  const int d = static_cast<int>(f.size()) - 1;
  auto frobenius_iterate = [&](int times) {
    FpPoly g{0, 1};
    for (int i = 0; i < times; ++i) g = fp_powmod(g, p, f, p);
    return g;
  };
  auto minus_x = [&](FpPoly g) {
    if (g.size() < 2) g.resize(2, 0);
    g[1] = (g[1] + p - 1) % p;
    trim(g);
    return g;
  };
  if (!minus_x(frobenius_iterate(d)).empty()) return false;
  for (int q = 2; q <= d; ++q) {
    if (d % q != 0 || !is_prime(static_cast<uint64_t>(q))) continue;
    FpPoly h = minus_x(frobenius_iterate(d / q));
    FpPoly g = fp_gcd(f, h, p);
    if (g.size() > 1) return false;
  }
  return true;
}

int ceil_div(int64_t a, int64_t b) {
  return static_cast<int>(a >= 0 ? (a + b - 1) / b : -((-a) / b));
}

}  // namespace

// ---------------------------------------------------------------- Valuation

Valuation Valuation::of(int64_t num, int64_t den) {
  if (den == 0) throw InvalidArgument("valuation with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const int64_t g = std::gcd(num < 0 ? -num : num, den);
  return {false, num / (g ? g : 1), den / (g ? g : 1)};
}

std::strong_ordering Valuation::operator<=>(const Valuation& other) const {
  if (infinite || other.infinite) {
    if (infinite && other.infinite) return std::strong_ordering::equal;
    return infinite ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  const __int128 lhs = static_cast<__int128>(num) * other.den;
  const __int128 rhs = static_cast<__int128>(other.num) * den;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Valuation::to_string() const {
  if (infinite) return "inf";
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

// ------------------------------------------------------------ FieldContext

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<int64_t> parse_polynomial(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw InvalidArgument("empty polynomial");
  std::map<int, int64_t> terms;
  size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    }
    int64_t coef = 1;
    bool have_coef = false;
    if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      size_t used = 0;
      coef = std::stoll(s.substr(i), &used);
      i += used;
      have_coef = true;
      if (i < s.size() && s[i] == '*') ++i;
    }
    int degree = 0;
    if (i < s.size() && s[i] == 'x') {
      ++i;
      degree = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        size_t used = 0;
        if (i >= s.size()) throw InvalidArgument("bad polynomial: " + text);
        degree = std::stoi(s.substr(i), &used);
        i += used;
      }
    } else if (!have_coef) {
      throw InvalidArgument("bad polynomial: " + text);
    }
    terms[degree] += sign * coef;
    if (i < s.size() && s[i] != '+' && s[i] != '-')
      throw InvalidArgument("bad polynomial: " + text);
  }
  const int deg = terms.rbegin()->first;
  std::vector<int64_t> out(static_cast<size_t>(deg) + 1, 0);
  for (auto [d, c] : terms) out[static_cast<size_t>(d)] = c;
  while (out.size() > 1 && out.back() == 0) out.pop_back();
  return out;
}

std::string FieldContext::poly_string() const {
  if (kind_ == ExtensionKind::Trivial) return "trivial";
  std::string out;
  for (int i = degree_; i >= 0; --i) {
    const int64_t c = poly_[static_cast<size_t>(i)];
    if (c == 0) continue;
    const int64_t a = c < 0 ? -c : c;
    if (!out.empty() || c < 0) out += c < 0 ? "-" : "+";
    if (a != 1 || i == 0) out += std::to_string(a);
    if (i >= 1) out += "x";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

std::string FieldContext::description() const {
  std::string base = "Q_" + std::to_string(p_);
  if (kind_ == ExtensionKind::Trivial) return base;
  return base + "[x]/(" + poly_string() + ")";
}

uint64_t FieldContext::p_power(int k) const {
  if (k <= 0) return 1;
  if (k > work_digits_) throw InternalError("p-power beyond working digits");
  return p_powers_[static_cast<size_t>(k)];
}

int FieldContext::coeff_digits(int i, int64_t prec) const {
  const int64_t room = prec - weight(i);
  if (room <= 0) return 0;
  const int d = kind_ == ExtensionKind::Eisenstein ? ceil_div(room, e_) : static_cast<int>(std::min<int64_t>(room, work_digits_));
  return std::min(d, work_digits_);
}

Coeffs FieldContext::normalize(Coeffs c, int64_t prec) const {
  for (int i = 0; i < kMaxDegree; ++i) {
    if (i >= degree_) {
      c[static_cast<size_t>(i)] = 0;
      continue;
    }
    const int d = coeff_digits(i, prec);
    c[static_cast<size_t>(i)] = d == 0 ? 0 : c[static_cast<size_t>(i)] % p_power(d);
  }
  return c;
}

Coeffs FieldContext::add(const Coeffs& a, const Coeffs& b) const {
  Coeffs r{};
  for (int i = 0; i < degree_; ++i) {
    const u128 s = static_cast<u128>(a[static_cast<size_t>(i)]) + b[static_cast<size_t>(i)];
    r[static_cast<size_t>(i)] = static_cast<uint64_t>(s % modulus_);
  }
  return r;
}

Coeffs FieldContext::neg(const Coeffs& a) const {
  Coeffs r{};
  for (int i = 0; i < degree_; ++i) {
    const uint64_t v = a[static_cast<size_t>(i)] % modulus_;
    r[static_cast<size_t>(i)] = v == 0 ? 0 : modulus_ - v;
  }
  return r;
}

Coeffs FieldContext::sub(const Coeffs& a, const Coeffs& b) const { return add(a, neg(b)); }

Coeffs FieldContext::scale(const Coeffs& a, uint64_t s) const {
  Coeffs r{};
  for (int i = 0; i < degree_; ++i) r[static_cast<size_t>(i)] = mulmod(a[static_cast<size_t>(i)], s, modulus_);
  return r;
}

Coeffs FieldContext::mul(const Coeffs& a, const Coeffs& b) const {
  if (degree_ == 1) return Coeffs{mulmod(a[0], b[0], modulus_)};
  std::array<uint64_t, 2 * kMaxDegree> prod{};
  for (int i = 0; i < degree_; ++i) {
    if (a[static_cast<size_t>(i)] == 0) continue;
    for (int j = 0; j < degree_; ++j) {
      const uint64_t t = mulmod(a[static_cast<size_t>(i)], b[static_cast<size_t>(j)], modulus_);
      prod[static_cast<size_t>(i + j)] = static_cast<uint64_t>((static_cast<u128>(prod[static_cast<size_t>(i + j)]) + t) % modulus_);
    }
  }
  for (int k = 2 * degree_ - 2; k >= degree_; --k) {
    const uint64_t c = prod[static_cast<size_t>(k)];
    if (c == 0) continue;
    prod[static_cast<size_t>(k)] = 0;
    for (int i = 0; i < degree_; ++i) {
      const uint64_t t = mulmod(c, f_low_[static_cast<size_t>(i)], modulus_);
      auto& slot = prod[static_cast<size_t>(k - degree_ + i)];
      slot = static_cast<uint64_t>((static_cast<u128>(slot) + modulus_ - t) % modulus_);
    }
  }
  Coeffs r{};
  for (int i = 0; i < degree_; ++i) r[static_cast<size_t>(i)] = prod[static_cast<size_t>(i)];
  return r;
}

Coeffs FieldContext::pi_power(int64_t k) const {
  if (k < static_cast<int64_t>(pi_powers_.size())) return pi_powers_[static_cast<size_t>(k)];
  if (kind_ != ExtensionKind::Eisenstein) return Coeffs{};
  Coeffs r = pi_powers_.back();
  Coeffs x{};
  x[1] = 1;
  for (int64_t i = static_cast<int64_t>(pi_powers_.size()) - 1; i < k; ++i) r = mul(r, x);
  return r;
}

int64_t FieldContext::poly_ord(const Coeffs& c, int64_t prec) const {
  int64_t best = prec;
  const int64_t scale = kind_ == ExtensionKind::Eisenstein ? e_ : 1;
  for (int i = 0; i < degree_; ++i) {
    const int d = coeff_digits(i, prec);
    if (d == 0) continue;
    const uint64_t ci = c[static_cast<size_t>(i)] % p_power(d);
    if (ci == 0) continue;
    best = std::min<int64_t>(best, scale * vp_u64(ci, p_) + weight(i));
  }
  return best;
}

Coeffs FieldContext::divide_by_pi(Coeffs c, int64_t t, int64_t prec) const {
  c = normalize(c, prec);
  if (t <= 0) return c;
  if (kind_ != ExtensionKind::Eisenstein) {
    const uint64_t d = p_power(static_cast<int>(t));
    for (int i = 0; i < degree_; ++i) {
      if (c[static_cast<size_t>(i)] % d != 0) throw InternalError("divide_by_pi: not divisible");
      c[static_cast<size_t>(i)] /= d;
    }
    return normalize(c, prec - t);
  }
  const int64_t q = t / e_;
  const int64_t r = t % e_;
  int64_t cur = prec;
  if (q > 0) {
    const uint64_t d = p_power(static_cast<int>(q));
    for (int i = 0; i < degree_; ++i) {
      if (c[static_cast<size_t>(i)] % d != 0) throw InternalError("divide_by_pi: not divisible");
      c[static_cast<size_t>(i)] /= d;
    }
    // pi^e = p * eta^{-1}, so c / pi^{qe} = (c / p^q) * p_unit^q
    for (int64_t i = 0; i < q; ++i) c = mul(c, p_unit_);
    cur -= q * e_;
    c = normalize(c, cur);
  }
  for (int64_t step = 0; step < r; ++step) {
    if (c[0] % p_ != 0) throw InternalError("divide_by_pi: constant term is a unit");
    const uint64_t s0 = c[0] / p_;
    Coeffs shifted{};
    for (int i = 1; i < degree_; ++i) shifted[static_cast<size_t>(i - 1)] = c[static_cast<size_t>(i)];
    c = add(shifted, scale(rho_, s0));
    cur -= 1;
    c = normalize(c, cur);
  }
  return c;
}

Coeffs FieldContext::residue_inverse(const Coeffs& u) const {
  if (f_res_ == 1) {
    const uint64_t c0 = u[0] % p_;
    if (c0 == 0) throw InternalError("residue_inverse: not a unit");
    return Coeffs{powmod(c0, p_ - 2, p_)};
  }
  // u^{q-2} in F_q = F_p[x]/(f mod p)
  mpz_class q;
  mpz_ui_pow_ui(q.get_mpz_t(), p_, static_cast<unsigned long>(f_res_));
  mpz_class exponent = q - 2;
  auto reduce_p = [&](Coeffs v) {
    for (auto& x : v) x %= p_;
    return v;
  };
  Coeffs base = reduce_p(u);
  Coeffs result{};
  result[0] = 1;
  const size_t bits = mpz_sizeinbase(exponent.get_mpz_t(), 2);
  for (size_t b = bits; b-- > 0;) {
    result = reduce_p(mul(result, result));
    if (mpz_tstbit(exponent.get_mpz_t(), b)) result = reduce_p(mul(result, base));
  }
  return result;
}

Coeffs FieldContext::unit_inverse(const Coeffs& u, int64_t prec) const {
  Coeffs y = residue_inverse(u);
  Coeffs two{};
  two[0] = 2 % modulus_;
  int64_t correct = 1;
  const int64_t target = std::max<int64_t>(prec, 1) + e_;
  while (correct < target) {
    y = mul(y, sub(two, mul(u, y)));
    correct *= 2;
  }
  return normalize(y, prec);
}

uint64_t FieldContext::reduce_int(int64_t v) const {
  const __int128 m = modulus_;
  __int128 r = static_cast<__int128>(v) % m;
  if (r < 0) r += m;
  return static_cast<uint64_t>(r);
}

uint64_t FieldContext::reduce_mpz(const mpz_class& v) const {
  return mpz_fdiv_ui(v.get_mpz_t(), modulus_);
}

void FieldContext::initialise() {
  work_digits_ = ceil_div(precision_, e_) + 2;
  p_powers_.assign(static_cast<size_t>(work_digits_) + 1, 1);
  u128 acc = 1;
  const u128 limit = static_cast<u128>(1) << 62;
  for (int k = 1; k <= work_digits_; ++k) {
    acc *= p_;
    if (acc >= limit)
      throw InvalidArgument("precision " + std::to_string(precision_) +
                            " is too large for word-size arithmetic at p = " + std::to_string(p_));
    p_powers_[static_cast<size_t>(k)] = static_cast<uint64_t>(acc);
  }
  modulus_ = p_powers_.back();
  f_low_ = Coeffs{};
  for (int i = 0; i < degree_ && degree_ > 1; ++i) f_low_[static_cast<size_t>(i)] = reduce_int(poly_[static_cast<size_t>(i)]);

  const int64_t full_prec = static_cast<int64_t>(e_) * work_digits_;
  p_unit_ = Coeffs{};
  p_unit_[0] = 1;
  if (kind_ == ExtensionKind::Eisenstein) {
    Coeffs eta{};
    for (int i = 0; i < e_; ++i) eta[static_cast<size_t>(i)] = reduce_int(-(poly_[static_cast<size_t>(i)] / static_cast<int64_t>(p_)));
    p_unit_ = unit_inverse(eta, full_prec);
    Coeffs xpow{};
    xpow[static_cast<size_t>(e_ - 1)] = 1;
    rho_ = mul(xpow, p_unit_);
  }
  const int64_t table = precision_ + 2 * e_ + 1;
  pi_powers_.clear();
  Coeffs cur{};
  cur[0] = 1;
  Coeffs x{};
  if (degree_ > 1) x[1] = 1;
  for (int64_t k = 0; k <= table; ++k) {
    if (kind_ == ExtensionKind::Eisenstein) {
      pi_powers_.push_back(cur);
      cur = mul(cur, x);
    } else {
      Coeffs c{};
      c[0] = k < work_digits_ ? p_powers_[static_cast<size_t>(k)] : 0;
      pi_powers_.push_back(c);
    }
  }
}

const FieldContext& make_field(uint64_t p, std::vector<int64_t> coeffs, int precision) {
  if (!is_prime(p)) throw InvalidArgument(std::to_string(p) + " is not prime");
  if (p == 2) throw InvalidArgument("p = 2 is not supported: the constructions assume p > 2");
  if (precision < 1) throw InvalidArgument("precision must be at least 1");
  while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
  if (coeffs.size() < 2 || coeffs.back() != 1)
    throw InvalidArgument("defining polynomial must be monic of degree >= 1");
  const int degree = static_cast<int>(coeffs.size()) - 1;
  if (degree > kMaxDegree)
    throw InvalidArgument("extensions of degree > " + std::to_string(kMaxDegree) + " are not supported");

  auto ctx = std::unique_ptr<FieldContext>(new FieldContext());
  ctx->p_ = p;
  ctx->precision_ = precision;
  if (degree == 1) {
    ctx->kind_ = ExtensionKind::Trivial;
    ctx->poly_ = {0, 1};
    ctx->degree_ = 1;
  } else {
    const int64_t ip = static_cast<int64_t>(p);
    bool eisenstein = coeffs[0] % ip == 0 && (coeffs[0] / ip) % ip != 0;
    for (int i = 1; i < degree; ++i) eisenstein = eisenstein && coeffs[static_cast<size_t>(i)] % ip == 0;
    ctx->poly_ = coeffs;
    ctx->degree_ = degree;
    if (eisenstein) {
      ctx->kind_ = ExtensionKind::Eisenstein;
      ctx->e_ = degree;
      ctx->f_res_ = 1;
    } else {
      FpPoly fbar(coeffs.size());
      for (size_t i = 0; i < coeffs.size(); ++i) {
        int64_t r = coeffs[i] % ip;
        fbar[i] = static_cast<uint64_t>(r < 0 ? r + ip : r);
      }
      if (!fp_irreducible(fbar, p))
        throw InvalidArgument("polynomial is neither Eisenstein nor irreducible mod " + std::to_string(p));
      ctx->kind_ = ExtensionKind::Unramified;
      ctx->e_ = 1;
      ctx->f_res_ = degree;
    }
  }

  static std::mutex mutex;
  static std::map<std::tuple<uint64_t, std::vector<int64_t>, int>, std::unique_ptr<FieldContext>> registry;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(p, ctx->poly_, precision);
  auto it = registry.find(key);
  if (it != registry.end()) return *it->second;
  ctx->initialise();
  auto& slot = registry[key];
  slot = std::move(ctx);
  return *slot;
}

const FieldContext& make_field(uint64_t p, const std::string& poly_spec, int precision) {
  if (poly_spec.empty() || poly_spec == "trivial") return make_field(p, std::vector<int64_t>{0, 1}, precision);
  return make_field(p, parse_polynomial(poly_spec), precision);
}

// ------------------------------------------------------------ FieldElement

namespace {

void require_same(const FieldElement& a, const FieldElement& b) {
  if (a.context_ptr() == nullptr || a.context_ptr() != b.context_ptr())
    throw InvalidArgument("field elements from different contexts");
}

}  // namespace

FieldElement FieldElement::zero_with_precision(const FieldContext& ctx, int64_t abs_prec) {
  FieldElement z(ctx);
  z.ord_ = abs_prec;
  return z;
}

FieldElement FieldElement::from_parts(const FieldContext& ctx, int64_t ord, const Coeffs& unit, int rel_prec) {
  FieldElement x(ctx);
  if (rel_prec <= 0) return zero_with_precision(ctx, ord);
  x.prec_ = std::min(rel_prec, ctx.precision());
  x.unit_ = ctx.normalize(unit, x.prec_);
  if (ctx.poly_ord(x.unit_, x.prec_) != 0) throw InternalError("from_parts: unit part is not a unit");
  x.ord_ = ord;
  return x;
}

FieldElement FieldElement::from_int(const FieldContext& ctx, int64_t n) {
  if (n == 0) return zero(ctx);
  return from_mpz(ctx, mpz_class(static_cast<long>(n)));
}

FieldElement FieldElement::from_mpz(const FieldContext& ctx, const mpz_class& n) {
  if (n == 0) return zero(ctx);
  mpz_class rest;
  mpz_class prime(static_cast<unsigned long>(ctx.p()));
  const auto v = static_cast<int64_t>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t()));
  Coeffs unit{};
  unit[0] = ctx.reduce_mpz(rest);
  if (ctx.kind() == ExtensionKind::Eisenstein) {
    for (int64_t i = 0; i < v; ++i) unit = ctx.mul(unit, ctx.unit_part_of_p());
  }
  return from_parts(ctx, v * ctx.e(), unit, ctx.precision());
}

FieldElement FieldElement::from_rational(const FieldContext& ctx, int64_t num, int64_t den) {
  if (den == 0) throw DivisionByZero("rational with zero denominator");
  return from_int(ctx, num) / from_int(ctx, den);
}

FieldElement FieldElement::from_rational(const FieldContext& ctx, const mpq_class& q) {
  if (q.get_den() == 0) throw DivisionByZero("rational with zero denominator");
  if (q.get_num() == 0) return zero(ctx);
  return from_mpz(ctx, q.get_num()) / from_mpz(ctx, q.get_den());
}

FieldElement FieldElement::uniformizer(const FieldContext& ctx) {
  Coeffs one{};
  one[0] = 1;
  return from_parts(ctx, 1, one, ctx.precision());
}

FieldElement FieldElement::generator(const FieldContext& ctx) {
  switch (ctx.kind()) {
    case ExtensionKind::Trivial:
      return zero(ctx);
    case ExtensionKind::Eisenstein:
      return uniformizer(ctx);
    case ExtensionKind::Unramified: {
      Coeffs x{};
      x[1] = 1;
      return from_parts(ctx, 0, x, ctx.precision());
    }
  }
  return zero(ctx);
}

FieldElement FieldElement::from_poly(const FieldContext& ctx, const std::vector<int64_t>& coeffs) {
  FieldElement acc = zero(ctx);
  FieldElement power = one(ctx);
  const FieldElement x = generator(ctx);
  for (size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] != 0) acc += from_int(ctx, coeffs[i]) * power;
    if (i + 1 < coeffs.size()) power = power * x;
  }
  return acc;
}

int64_t FieldElement::ord() const {
  if (is_zero() && !is_exact_zero())
    throw PrecisionError("valuation undetermined: element is zero to precision O(pi^" + std::to_string(ord_) + ")");
  return ord_;
}

int64_t FieldElement::abs_precision() const {
  if (is_zero()) return ord_;
  return ord_ + prec_;
}

Valuation FieldElement::valuation() const {
  const int64_t o = ord();
  if (o == kInfiniteOrd) return Valuation::infinity();
  return Valuation::of(o, ctx_->e());
}

FieldElement FieldElement::truncated(int64_t abs_prec) const {
  if (abs_prec >= kInfiniteOrd) return *this;
  if (is_zero()) return zero_with_precision(*ctx_, std::min(ord_, abs_prec));
  if (ord_ >= abs_prec) return zero_with_precision(*ctx_, abs_prec);
  const int64_t rel = std::min<int64_t>(prec_, abs_prec - ord_);
  if (rel == prec_) return *this;
  FieldElement r = *this;
  r.prec_ = static_cast<int32_t>(rel);
  r.unit_ = ctx_->normalize(unit_, rel);
  return r;
}

FieldElement FieldElement::lifted() const {
  if (is_zero()) return FieldElement(*ctx_);
  FieldElement r = *this;
  r.prec_ = static_cast<int32_t>(ctx_->precision());
  return r;
}

FieldElement FieldElement::operator-() const {
  if (is_zero()) return *this;
  FieldElement r = *this;
  r.unit_ = ctx_->normalize(ctx_->neg(unit_), prec_);
  return r;
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  if (a.is_zero()) return b.truncated(a.ord_);
  if (b.is_zero()) return a.truncated(b.ord_);
  const FieldContext& ctx = *a.ctx_;
  const FieldElement& lo = a.ord_ <= b.ord_ ? a : b;
  const FieldElement& hi = a.ord_ <= b.ord_ ? b : a;
  const int64_t abs = std::min(lo.ord_ + lo.prec_, hi.ord_ + hi.prec_);
  const int64_t rel = abs - lo.ord_;
  const int64_t shift = hi.ord_ - lo.ord_;
  Coeffs s = lo.unit_;
  if (shift < rel) s = ctx.add(s, ctx.mul(hi.unit_, ctx.pi_power(shift)));
  s = ctx.normalize(s, rel);
  const int64_t t = ctx.poly_ord(s, rel);
  if (t >= rel) return FieldElement::zero_with_precision(ctx, abs);
  if (t > 0) s = ctx.divide_by_pi(s, t, rel);
  FieldElement r(ctx);
  r.ord_ = lo.ord_ + t;
  r.prec_ = static_cast<int32_t>(rel - t);
  r.unit_ = s;
  return r;
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) { return a + (-b); }

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  const FieldContext& ctx = *a.ctx_;
  if (a.is_exact_zero() || b.is_exact_zero()) return FieldElement::zero(ctx);
  if (a.is_zero() || b.is_zero()) {
    return FieldElement::zero_with_precision(ctx, a.ord_ + b.ord_);
  }
  FieldElement r(ctx);
  r.ord_ = a.ord_ + b.ord_;
  r.prec_ = std::min(a.prec_, b.prec_);
  r.unit_ = ctx.normalize(ctx.mul(a.unit_, b.unit_), r.prec_);
  return r;
}

FieldElement FieldElement::inverse() const {
  if (is_exact_zero()) throw DivisionByZero("inverse of zero");
  if (is_zero()) throw PrecisionError("inverse of an element indistinguishable from zero");
  FieldElement r(*ctx_);
  r.ord_ = -ord_;
  r.prec_ = prec_;
  r.unit_ = ctx_->unit_inverse(unit_, prec_);
  return r;
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  return a * b.inverse();
}

FieldElement FieldElement::pow(int64_t n) const {
  if (n < 0) return inverse().pow(-n);
  FieldElement result = one(*ctx_);
  FieldElement base = *this;
  while (n) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

bool operator==(const FieldElement& a, const FieldElement& b) {
  require_same(a, b);
  return (a - b).is_zero();
}

namespace {

std::string balanced(uint64_t v, uint64_t mod) {
  if (mod <= 1) return "0";
  if (v > mod / 2) return "-" + std::to_string(mod - v);
  return std::to_string(v);
}

std::string render_poly(const FieldContext& ctx, const Coeffs& c, int64_t prec) {
  std::vector<std::string> parts;
  for (int i = 0; i < ctx.degree(); ++i) {
    const int d = ctx.coeff_digits(i, prec);
    const uint64_t mod = ctx.p_power(d);
    const uint64_t v = c[static_cast<size_t>(i)] % mod;
    if (v == 0) continue;
    std::string coef = balanced(v, mod);
    if (i == 0) {
      parts.push_back(coef);
    } else {
      std::string mono = i == 1 ? "x" : "x^" + std::to_string(i);
      parts.push_back(coef == "1" ? mono : coef == "-1" ? "-" + mono : coef + "*" + mono);
    }
  }
  if (parts.empty()) return "0";
  std::string out = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) out += parts[i][0] == '-' ? parts[i] : "+" + parts[i];
  return out;
}

}  // namespace

std::string FieldElement::to_string() const {
  if (ctx_ == nullptr) return "<null>";
  const std::string pi = ctx_->kind() == ExtensionKind::Eisenstein ? "pi" : std::to_string(ctx_->p());
  if (is_exact_zero()) return "0";
  if (is_zero()) return "O(" + pi + "^" + std::to_string(ord_) + ")";
  std::string u = render_poly(*ctx_, unit_, prec_);
  if (ctx_->degree() > 1 && u.find_first_of("+-", 1) != std::string::npos) u = "(" + u + ")";
  if (ord_ == 0) return u;
  return pi + "^" + std::to_string(ord_) + "*" + u;
}

// ----------------------------------------------------------------- Residue

Residue Residue::from_coeffs(const FieldContext& ctx, int n, const Coeffs& c) {
  Residue r(ctx, n);
  r.c_ = ctx.normalize(c, n);
  return r;
}

bool Residue::is_zero() const {
  for (auto v : c_)
    if (v != 0) return false;
  return true;
}

int64_t Residue::ord() const { return ctx_->poly_ord(c_, n_); }

FieldElement Residue::lift() const {
  std::vector<int64_t> coeffs(static_cast<size_t>(ctx_->degree()));
  for (int i = 0; i < ctx_->degree(); ++i) coeffs[static_cast<size_t>(i)] = static_cast<int64_t>(c_[static_cast<size_t>(i)]);
  return FieldElement::from_poly(*ctx_, coeffs);
}

Residue Residue::operator-() const { return from_coeffs(*ctx_, n_, ctx_->neg(c_)); }

namespace {
void require_same(const Residue& a, const Residue& b) {
  if (&a.context() != &b.context() || a.exponent() != b.exponent())
    throw InvalidArgument("residues from different rings");
}
}  // namespace

Residue operator+(const Residue& a, const Residue& b) {
  require_same(a, b);
  return Residue::from_coeffs(*a.ctx_, a.n_, a.ctx_->add(a.c_, b.c_));
}

Residue operator-(const Residue& a, const Residue& b) {
  require_same(a, b);
  return Residue::from_coeffs(*a.ctx_, a.n_, a.ctx_->sub(a.c_, b.c_));
}

Residue operator*(const Residue& a, const Residue& b) {
  require_same(a, b);
  return Residue::from_coeffs(*a.ctx_, a.n_, a.ctx_->mul(a.c_, b.c_));
}

bool operator==(const Residue& a, const Residue& b) {
  require_same(a, b);
  return a.c_ == b.c_;
}

std::string Residue::to_string() const {
  const std::string pi = ctx_->kind() == ExtensionKind::Eisenstein ? "pi" : std::to_string(ctx_->p());
  return render_poly(*ctx_, c_, n_) + " mod " + pi + "^" + std::to_string(n_);
}

Residue reduce_mod(const FieldElement& x, int n) {
  const FieldContext& ctx = x.context();
  if (n < 1 || n > ctx.precision())
    throw InvalidArgument("reduction exponent must lie in [1, " + std::to_string(ctx.precision()) + "]");
  if (!x.is_zero() && x.ord_lower_bound() < 0)
    throw DomainError("cannot reduce an element of negative valuation");
  if (x.abs_precision() < n)
    throw PrecisionError("element known only modulo pi^" + std::to_string(x.abs_precision()) +
                         ", cannot reduce modulo pi^" + std::to_string(n));
  Residue r(ctx, n);
  if (x.is_zero() || x.ord_lower_bound() >= n) return r;
  return Residue::from_coeffs(ctx, n, ctx.mul(ctx.pi_power(x.ord_lower_bound()), x.unit()));
}

}  // namespace padicdiag
