#pragma once

// Fixed-precision arithmetic in a finite extension L of Q_p.
//
// An element is stored as pi^ord * u with u a unit of o_L written in the
// power basis 1, x, ..., x^{d-1} of the defining polynomial. Each element
// carries its own relative precision (capped at the context precision N),
// so cancellation is tracked instead of silently padded with zeros. A sum
// that cancels completely yields a zero that remembers its absolute
// precision ("inexact zero"); only constructors produce exact zeros.

#include <array>
#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "padicdiag/errors.hpp"

namespace padicdiag {

inline constexpr int kMaxDegree = 4;
inline constexpr int64_t kInfiniteOrd = std::numeric_limits<int64_t>::max() / 4;

using Coeffs = std::array<uint64_t, kMaxDegree>;

enum class ExtensionKind { Trivial, Eisenstein, Unramified };

/// Rational valuation normalised by val(p) = 1, or +infinity.
struct Valuation {
  bool infinite = false;
  int64_t num = 0;
  int64_t den = 1;

  static Valuation infinity() { return {true, 0, 1}; }
  static Valuation of(int64_t num, int64_t den);

  std::strong_ordering operator<=>(const Valuation& other) const;
  bool operator==(const Valuation& other) const {
    return (*this <=> other) == std::strong_ordering::equal;
  }
  std::string to_string() const;
};

/// Parameters of L = Q_p[x]/(f) and precomputed tables. Contexts are
/// interned by make_field and live for the whole process; elements refer to
/// them by pointer.
class FieldContext {
 public:
  uint64_t p() const { return p_; }
  ExtensionKind kind() const { return kind_; }
  int degree() const { return degree_; }
  int e() const { return e_; }
  int f_res() const { return f_res_; }
  /// Working precision N in pi-digits.
  int precision() const { return precision_; }
  /// Monic defining polynomial, coefficients low to high ({0, 1} for Q_p).
  const std::vector<int64_t>& defining_poly() const { return poly_; }
  std::string poly_string() const;
  std::string description() const;

  // Low-level polynomial arithmetic on unit parts. Coefficients live in
  // Z/p^W with W = work_digits(); "prec" arguments count pi-digits.
  uint64_t modulus() const { return modulus_; }
  int work_digits() const { return work_digits_; }
  uint64_t p_power(int k) const;
  int weight(int i) const { return kind_ == ExtensionKind::Eisenstein ? i : 0; }
  int coeff_digits(int i, int64_t prec) const;
  Coeffs normalize(Coeffs c, int64_t prec) const;
  Coeffs add(const Coeffs& a, const Coeffs& b) const;
  Coeffs sub(const Coeffs& a, const Coeffs& b) const;
  Coeffs neg(const Coeffs& a) const;
  Coeffs mul(const Coeffs& a, const Coeffs& b) const;
  Coeffs scale(const Coeffs& a, uint64_t s) const;
  /// pi^k as a polynomial (k >= 0).
  Coeffs pi_power(int64_t k) const;
  /// Valuation of a normalised polynomial known modulo pi^prec; returns
  /// prec when every known digit vanishes.
  int64_t poly_ord(const Coeffs& c, int64_t prec) const;
  /// Exact division by pi^t of a polynomial with poly_ord >= t.
  Coeffs divide_by_pi(Coeffs c, int64_t t, int64_t prec) const;
  /// Inverse of a unit modulo pi^prec (Newton iteration).
  Coeffs unit_inverse(const Coeffs& u, int64_t prec) const;
  /// Unit part of p, i.e. p = pi^e * unit_part_of_p().
  const Coeffs& unit_part_of_p() const { return p_unit_; }
  uint64_t reduce_int(int64_t v) const;
  uint64_t reduce_mpz(const mpz_class& v) const;

 private:
  friend const FieldContext& make_field(uint64_t, std::vector<int64_t>, int);
  FieldContext() = default;
  void initialise();
  Coeffs residue_inverse(const Coeffs& u) const;

  uint64_t p_ = 0;
  ExtensionKind kind_ = ExtensionKind::Trivial;
  int degree_ = 1;
  int e_ = 1;
  int f_res_ = 1;
  int precision_ = 1;
  int work_digits_ = 1;
  uint64_t modulus_ = 1;
  std::vector<int64_t> poly_;
  std::vector<uint64_t> p_powers_;
  Coeffs f_low_{};  // f = x^d + sum f_low_[i] x^i, reduced mod p^W
  Coeffs p_unit_{};
  Coeffs rho_{};  // x^{e-1} * eta^{-1}, used to divide by pi
  std::vector<Coeffs> pi_powers_;
};

/// Creates (or returns the interned) context for Q_p[x]/(f).
/// poly_spec is "trivial" for Q_p itself or a polynomial such as "x^2-3".
const FieldContext& make_field(uint64_t p, const std::string& poly_spec, int precision);
const FieldContext& make_field(uint64_t p, std::vector<int64_t> monic_coeffs, int precision);

std::vector<int64_t> parse_polynomial(const std::string& text);
bool is_prime(uint64_t n);

class FieldElement {
 public:
  FieldElement() = default;
  explicit FieldElement(const FieldContext& ctx) : ctx_(&ctx) {}

  static FieldElement zero(const FieldContext& ctx) { return FieldElement(ctx); }
  static FieldElement zero_with_precision(const FieldContext& ctx, int64_t abs_prec);
  static FieldElement one(const FieldContext& ctx) { return from_int(ctx, 1); }
  static FieldElement from_int(const FieldContext& ctx, int64_t n);
  static FieldElement from_rational(const FieldContext& ctx, int64_t num, int64_t den);
  static FieldElement from_rational(const FieldContext& ctx, const mpq_class& q);
  static FieldElement from_mpz(const FieldContext& ctx, const mpz_class& n);
  static FieldElement uniformizer(const FieldContext& ctx);
  static FieldElement generator(const FieldContext& ctx);
  /// sum c_i x^i with exact integer coefficients.
  static FieldElement from_poly(const FieldContext& ctx, const std::vector<int64_t>& coeffs);
  static FieldElement from_parts(const FieldContext& ctx, int64_t ord, const Coeffs& unit,
                                 int rel_prec);

  const FieldContext& context() const { return *ctx_; }
  const FieldContext* context_ptr() const { return ctx_; }
  bool is_zero() const { return prec_ == 0; }
  bool is_exact_zero() const { return prec_ == 0 && ord_ == kInfiniteOrd; }
  /// pi-adic valuation; kInfiniteOrd for exact zero, PrecisionError for a
  /// zero known only to finite precision.
  int64_t ord() const;
  /// Lower bound on the pi-adic valuation that never throws.
  int64_t ord_lower_bound() const { return ord_; }
  int64_t abs_precision() const;
  int rel_precision() const { return prec_; }
  const Coeffs& unit() const { return unit_; }
  Valuation valuation() const;
  bool is_unit() const { return !is_zero() && ord_ == 0; }
  bool is_integral() const { return ord_ >= 0; }

  FieldElement operator-() const;
  FieldElement inverse() const;
  FieldElement pow(int64_t n) const;
  /// Drops every digit at or beyond pi^abs_prec.
  FieldElement truncated(int64_t abs_prec) const;
  /// Same digits read with full relative precision; an inexact zero becomes exact.
  FieldElement lifted() const;

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  FieldElement& operator+=(const FieldElement& b) { return *this = *this + b; }
  FieldElement& operator-=(const FieldElement& b) { return *this = *this - b; }
  FieldElement& operator*=(const FieldElement& b) { return *this = *this * b; }
  /// Equality at the working precision: the difference is zero.
  friend bool operator==(const FieldElement& a, const FieldElement& b);

  std::string to_string() const;

 private:
  const FieldContext* ctx_ = nullptr;
  int64_t ord_ = kInfiniteOrd;  // valuation, or absolute precision of a zero
  int32_t prec_ = 0;            // relative precision; 0 marks a zero
  Coeffs unit_{};
};

/// Element of o_L / p_L^n, stored by its canonical coefficient vector.
class Residue {
 public:
  Residue() = default;
  Residue(const FieldContext& ctx, int n) : ctx_(&ctx), n_(n) {}
  static Residue from_coeffs(const FieldContext& ctx, int n, const Coeffs& c);

  const FieldContext& context() const { return *ctx_; }
  int exponent() const { return n_; }
  const Coeffs& coefficients() const { return c_; }
  bool is_zero() const;
  /// pi-adic valuation, capped at n for zero.
  int64_t ord() const;
  /// Canonical lift to o_L at full precision.
  FieldElement lift() const;

  Residue operator-() const;
  friend Residue operator+(const Residue& a, const Residue& b);
  friend Residue operator-(const Residue& a, const Residue& b);
  friend Residue operator*(const Residue& a, const Residue& b);
  friend bool operator==(const Residue& a, const Residue& b);

  std::string to_string() const;

 private:
  const FieldContext* ctx_ = nullptr;
  int n_ = 0;
  Coeffs c_{};
};

/// Canonical representative of x in o_L / p_L^n.
Residue reduce_mod(const FieldElement& x, int n);

}  // namespace padicdiag
