#include "padicdiag/gl2_finite.hpp"

#include <algorithm>
#include <set>

namespace padicdiag {

namespace {

using u128 = unsigned __int128;

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<u128>(a) * b % m);
}

uint64_t reduce(int64_t v, uint64_t m) {
  __int128 r = static_cast<__int128>(v) % static_cast<__int128>(m);
  if (r < 0) r += m;
  return static_cast<uint64_t>(r);
}

void require_compatible(const FiniteMatrix& x, const FiniteMatrix& y) {
  if (x.p() != y.p()) throw InvalidArgument("matrices over different primes");
}

}  // namespace

uint64_t power_of(uint64_t p, int k) {
  if (k < 0) throw InvalidArgument("negative exponent");
  u128 r = 1;
  for (int i = 0; i < k; ++i) {
    r *= p;
    if (r >= (static_cast<u128>(1) << 62)) throw InvalidArgument("p^k exceeds word-size arithmetic");
  }
  return static_cast<uint64_t>(r);
}

uint64_t inverse_mod(uint64_t a, uint64_t m) {
  mpz_class r, aa(static_cast<unsigned long>(a % m)), mm(static_cast<unsigned long>(m));
  if (mpz_invert(r.get_mpz_t(), aa.get_mpz_t(), mm.get_mpz_t()) == 0)
    throw DomainError(std::to_string(a) + " is not invertible mod " + std::to_string(m));
  return r.get_ui();
}

uint64_t primitive_root(uint64_t p) {
  const uint64_t p2 = p * p;
  const uint64_t order = p * (p - 1);
  std::vector<uint64_t> primes;
  uint64_t n = order;
  for (uint64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) {
      primes.push_back(q);
      while (n % q == 0) n /= q;
    }
  if (n > 1) primes.push_back(n);
  auto pw = [&](uint64_t b, uint64_t e) {
    uint64_t r = 1;
    while (e) {
      if (e & 1) r = mulmod(r, b, p2);
      b = mulmod(b, b, p2);
      e >>= 1;
    }
    return r;
  };
  for (uint64_t g = 2; g < p2; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (auto q : primes) ok = ok && pw(g, order / q) != 1;
    if (ok) return g;
  }
  throw InternalError("no primitive root found");
}

// ------------------------------------------------------------ FiniteMatrix

FiniteMatrix::FiniteMatrix(uint64_t p, int level, int64_t a, int64_t b, int64_t c, int64_t d)
    : p_(p), level_(level), mod_(power_of(p, level)) {
  if (level < 1) throw InvalidArgument("matrix level must be at least 1");
  e_[0] = reduce(a, mod_);
  e_[1] = reduce(b, mod_);
  e_[2] = reduce(c, mod_);
  e_[3] = reduce(d, mod_);
}

uint64_t FiniteMatrix::det() const {
  const uint64_t ad = mulmod(e_[0], e_[3], mod_);
  const uint64_t bc = mulmod(e_[1], e_[2], mod_);
  return (ad + mod_ - bc) % mod_;
}

FiniteMatrix FiniteMatrix::inverse() const {
  const uint64_t dt = det();
  if (dt % p_ == 0) throw DomainError("matrix is not invertible mod p: " + to_string());
  const uint64_t inv = inverse_mod(dt, mod_);
  FiniteMatrix r = *this;
  r.e_[0] = mulmod(e_[3], inv, mod_);
  r.e_[1] = mulmod(mod_ - e_[1], inv, mod_) % mod_;
  r.e_[2] = mulmod(mod_ - e_[2], inv, mod_) % mod_;
  r.e_[3] = mulmod(e_[0], inv, mod_);
  return r;
}

FiniteMatrix FiniteMatrix::reduced(int level) const {
  if (level > level_) throw PrecisionError("cannot lift a matrix to a higher level");
  if (level == level_) return *this;
  FiniteMatrix r = *this;
  r.level_ = level;
  r.mod_ = power_of(p_, level);
  for (auto& v : r.e_) v %= r.mod_;
  return r;
}

FiniteMatrix operator*(const FiniteMatrix& x, const FiniteMatrix& y) {
  require_compatible(x, y);
  const FiniteMatrix& lo = x.level_ <= y.level_ ? x : y;
  const FiniteMatrix xx = x.reduced(lo.level_), yy = y.reduced(lo.level_);
  const uint64_t m = lo.mod_;
  FiniteMatrix r = lo;
  r.e_[0] = (mulmod(xx.e_[0], yy.e_[0], m) + mulmod(xx.e_[1], yy.e_[2], m)) % m;
  r.e_[1] = (mulmod(xx.e_[0], yy.e_[1], m) + mulmod(xx.e_[1], yy.e_[3], m)) % m;
  r.e_[2] = (mulmod(xx.e_[2], yy.e_[0], m) + mulmod(xx.e_[3], yy.e_[2], m)) % m;
  r.e_[3] = (mulmod(xx.e_[2], yy.e_[1], m) + mulmod(xx.e_[3], yy.e_[3], m)) % m;
  return r;
}

bool operator==(const FiniteMatrix& x, const FiniteMatrix& y) {
  return x.p_ == y.p_ && x.level_ == y.level_ && std::equal(x.e_, x.e_ + 4, y.e_);
}

bool operator<(const FiniteMatrix& x, const FiniteMatrix& y) {
  return std::lexicographical_compare(x.e_, x.e_ + 4, y.e_, y.e_ + 4);
}

std::string FiniteMatrix::to_string() const {
  return "[[" + std::to_string(e_[0]) + "," + std::to_string(e_[1]) + "],[" + std::to_string(e_[2]) + "," +
         std::to_string(e_[3]) + "]] mod " + std::to_string(p_) + "^" + std::to_string(level_);
}

// --------------------------------------------------------------- subgroups

const char* subgroup_name(Subgroup s) {
  switch (s) {
    case Subgroup::K:
      return "K";
    case Subgroup::Km:
      return "K_m";
    case Subgroup::Im:
      return "I_m";
    case Subgroup::I:
      return "I";
    case Subgroup::Jc:
      return "J_c";
  }
  return "?";
}

bool subgroup_membership(const FiniteMatrix& g, Subgroup s, int m) {
  if (!g.invertible()) return false;
  if (s != Subgroup::K && s != Subgroup::I && (m < 1 || m > g.level()))
    throw InvalidArgument("subgroup parameter must lie in [1, level]");
  const uint64_t p = g.p();
  const uint64_t mod = g.modulus();
  auto divisible = [&](uint64_t v, int k) { return k <= 0 || v % power_of(p, std::min(k, g.level())) == 0; };
  auto one_mod = [&](uint64_t v, int k) { return divisible((v + mod - 1) % mod, k); };
  switch (s) {
    case Subgroup::K:
      return true;
    case Subgroup::Km:
      return one_mod(g.a(), m) && one_mod(g.d(), m) && divisible(g.b(), m) && divisible(g.c(), m);
    case Subgroup::Im:
      return one_mod(g.a(), m) && one_mod(g.d(), m) && divisible(g.b(), m - 1) && divisible(g.c(), m);
    case Subgroup::I:
      return divisible(g.c(), 1);
    case Subgroup::Jc:
      return divisible(g.c(), m);
  }
  return false;
}

std::vector<FiniteMatrix> subgroup_generators(uint64_t p, int level, Subgroup s, int m) {
  const int64_t u = static_cast<int64_t>(primitive_root(p));
  const auto pm = [&](int k) { return static_cast<int64_t>(power_of(p, k)); };
  std::vector<FiniteMatrix> gens;
  switch (s) {
    case Subgroup::K:
      gens = {FiniteMatrix::e12(p, level, 1), FiniteMatrix::e21(p, level, 1), FiniteMatrix::diag(p, level, u, 1),
              FiniteMatrix::diag(p, level, 1, u)};
      break;
    case Subgroup::I:
      gens = {FiniteMatrix::e12(p, level, 1), FiniteMatrix::e21(p, level, static_cast<int64_t>(p)),
              FiniteMatrix::diag(p, level, u, 1), FiniteMatrix::diag(p, level, 1, u)};
      break;
    case Subgroup::Jc:
      gens = {FiniteMatrix::e12(p, level, 1), FiniteMatrix::e21(p, level, pm(m)), FiniteMatrix::diag(p, level, u, 1),
              FiniteMatrix::diag(p, level, 1, u)};
      break;
    case Subgroup::Im:
      gens = {FiniteMatrix::e12(p, level, pm(m - 1)), FiniteMatrix::e21(p, level, pm(m)),
              FiniteMatrix::diag(p, level, 1 + pm(m), 1), FiniteMatrix::diag(p, level, 1, 1 + pm(m))};
      break;
    case Subgroup::Km:
      gens = {FiniteMatrix::e12(p, level, pm(m)), FiniteMatrix::e21(p, level, pm(m)),
              FiniteMatrix::diag(p, level, 1 + pm(m), 1), FiniteMatrix::diag(p, level, 1, 1 + pm(m))};
      break;
  }
  // drop generators that are trivial at this level
  std::vector<FiniteMatrix> out;
  const FiniteMatrix id = FiniteMatrix::identity(p, level);
  for (const auto& g : gens)
    if (!(g == id) && std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
  return out;
}

std::vector<FiniteMatrix> generated_subgroup(const std::vector<FiniteMatrix>& gens) {
  if (gens.empty()) return {};
  const FiniteMatrix id = FiniteMatrix::identity(gens.front().p(), gens.front().level());
  std::set<FiniteMatrix> seen{id};
  std::vector<FiniteMatrix> frontier{id};
  while (!frontier.empty()) {
    std::vector<FiniteMatrix> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        FiniteMatrix y = x * g;
        if (seen.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

FiniteMatrix conjugate_by_Pi(const FiniteMatrix& g) {
  const uint64_t p = g.p();
  if (g.c() % p != 0) throw DomainError("conjugation by Pi needs a matrix in I: " + g.to_string());
  if (g.level() < 2) throw PrecisionError("conjugation by Pi needs level at least 2");
  const int out = g.level() - 1;
  return FiniteMatrix(p, out, static_cast<int64_t>(g.d()), static_cast<int64_t>(g.c() / p),
                      static_cast<int64_t>(mulmod(g.b(), p, g.modulus())), static_cast<int64_t>(g.a()));
}

// ------------------------------------------------------------------ cosets

std::string CosetLabel::to_string(uint64_t p) const {
  if (affine) return "(" + std::to_string(gamma) + ":1)";
  return "(1:" + std::to_string(p * gamma) + ")";
}

CosetSpace::CosetSpace(uint64_t p, int c) : p_(p), c_(c), pc_(power_of(p, c)) {
  if (c < 1) throw InvalidArgument("coset level must be at least 1");
  for (uint64_t g = 0; g < pc_; ++g) labels_.push_back({true, g});
  for (uint64_t g = 0; g < pc_ / p; ++g) labels_.push_back({false, g});
}

size_t CosetSpace::index_of(const CosetLabel& l) const {
  return l.affine ? static_cast<size_t>(l.gamma) : static_cast<size_t>(pc_ + l.gamma);
}

FiniteMatrix CosetSpace::representative(size_t i) const {
  const CosetLabel& l = labels_.at(i);
  if (l.affine) return FiniteMatrix::e21(p_, c_, static_cast<int64_t>(l.gamma));
  return FiniteMatrix(p_, c_, 0, 1, 1, static_cast<int64_t>(p_ * l.gamma));
}

CosetSpace::Decomposition CosetSpace::decompose(const FiniteMatrix& x0) const {
  if (!x0.invertible()) throw DomainError("coset decomposition needs an element of K");
  const FiniteMatrix x = x0.reduced(c_);
  const uint64_t m = x.modulus();
  CosetLabel l;
  if (x.d() % p_ != 0) {
    l = {true, mulmod(x.c(), inverse_mod(x.d(), m), m)};
  } else {
    const uint64_t t = mulmod(x.d(), inverse_mod(x.c(), m), m);
    l = {false, t / p_};
  }
  const size_t idx = index_of(l);
  return {idx, x * representative(idx).inverse()};
}

IwahoriSide iwahori_side(const FiniteMatrix& x) {
  if (!x.invertible()) throw DomainError("iwahori_side needs an element of K");
  return x.c() % x.p() == 0 ? IwahoriSide::One : IwahoriSide::S;
}

// ---------------------------------------------------------------- QMatrix2

int64_t padic_val(const mpz_class& z, uint64_t p) {
  if (z == 0) throw DomainError("valuation of zero");
  mpz_class rest, pp(static_cast<unsigned long>(p));
  return static_cast<int64_t>(mpz_remove(rest.get_mpz_t(), z.get_mpz_t(), pp.get_mpz_t()));
}

int64_t padic_val(const mpq_class& q, uint64_t p) {
  return padic_val(mpz_class(q.get_num()), p) - padic_val(mpz_class(q.get_den()), p);
}

uint64_t residue_mod(const mpq_class& q, uint64_t p, int level) {
  const mpz_class mod(static_cast<unsigned long>(power_of(p, level)));
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), q.get_den_mpz_t(), mod.get_mpz_t()) == 0)
    throw DomainError("rational is not p-integral");
  mpz_class r = q.get_num() * inv;
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
  return r.get_ui();
}

QMatrix2 QMatrix2::pi(uint64_t p) { return {0, 1, mpq_class(static_cast<unsigned long>(p)), 0}; }

QMatrix2 QMatrix2::from_finite(const FiniteMatrix& m) {
  return {mpq_class(static_cast<unsigned long>(m.a())), mpq_class(static_cast<unsigned long>(m.b())),
          mpq_class(static_cast<unsigned long>(m.c())), mpq_class(static_cast<unsigned long>(m.d()))};
}

QMatrix2 QMatrix2::inverse() const {
  const mpq_class dt = det();
  if (dt == 0) throw DomainError("singular rational matrix");
  QMatrix2 r{d / dt, -b / dt, -c / dt, a / dt};
  return r;
}

bool QMatrix2::integral_at(uint64_t p) const {
  for (const mpq_class* v : {&a, &b, &c, &d})
    if (mpz_divisible_ui_p(v->get_den_mpz_t(), static_cast<unsigned long>(p))) return false;
  return true;
}

bool QMatrix2::in_gl2_zp(uint64_t p) const { return integral_at(p) && det() != 0 && padic_val(det(), p) == 0; }

mpq_class p_power(uint64_t p, int64_t z) {
  mpq_class out = 1;
  const mpq_class pq(static_cast<unsigned long>(p));
  for (int64_t i = 0; i < z; ++i) out *= pq;
  for (int64_t i = 0; i < -z; ++i) out /= pq;
  return out;
}

FiniteMatrix QMatrix2::reduce(uint64_t p, int level) const {
  return FiniteMatrix(p, level, static_cast<int64_t>(residue_mod(a, p, level)),
                      static_cast<int64_t>(residue_mod(b, p, level)), static_cast<int64_t>(residue_mod(c, p, level)),
                      static_cast<int64_t>(residue_mod(d, p, level)));
}

QMatrix2 operator*(const QMatrix2& x, const QMatrix2& y) {
  QMatrix2 r{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  return r;
}

std::string QMatrix2::to_string() const {
  return "[[" + a.get_str() + "," + b.get_str() + "],[" + c.get_str() + "," + d.get_str() + "]]";
}

// --------------------------------------------------------- ExtendedElement

ExtendedElement operator*(const ExtendedElement& x, const ExtendedElement& y) {
  ExtendedElement r;
  r.z = x.z + y.z;
  if (y.e == 0) {
    r.e = x.e;
    r.k = x.k * y.k;
    return r;
  }
  // k Pi = Pi (Pi^{-1} k Pi)
  const FiniteMatrix moved = conjugate_by_Pi(x.k);
  r.k = moved * y.k;
  if (x.e == 1) {
    r.e = 0;
    r.z += 1;
  } else {
    r.e = 1;
  }
  return r;
}

bool operator==(const ExtendedElement& x, const ExtendedElement& y) {
  if (x.z != y.z || x.e != y.e) return false;
  const int lvl = std::min(x.k.level(), y.k.level());
  return x.k.reduced(lvl) == y.k.reduced(lvl);
}

}  // namespace padicdiag
