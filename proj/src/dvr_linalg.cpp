#include "padicdiag/dvr_linalg.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <type_traits>

namespace padicdiag {

// ------------------------------------------------------------------ Matrix

namespace {

// Exact zeros contribute nothing; an inexact zero still carries precision.
template <class T>
bool skip_entry(const T& x) {
  if constexpr (std::is_same_v<T, FieldElement>) {
    return x.is_exact_zero();
  } else {
    return x.is_zero();
  }
}

}  // namespace

template <class T>
Matrix<T> Matrix<T>::operator*(const Matrix& b) const {
  if (cols_ != b.rows_) throw InvalidArgument("matrix product: dimension mismatch");
  Matrix r(rows_, b.cols_, zero_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      const T& a = (*this)(i, k);
      if (skip_entry(a)) continue;
      for (size_t j = 0; j < b.cols_; ++j) {
        const T& bb = b(k, j);
        if (skip_entry(bb)) continue;
        r(i, j) = r(i, j) + a * bb;
      }
    }
  return r;
}

template <class T>
Matrix<T> Matrix<T>::operator+(const Matrix& b) const {
  if (rows_ != b.rows_ || cols_ != b.cols_) throw InvalidArgument("matrix sum: dimension mismatch");
  Matrix r = *this;
  for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + b.data_[i];
  return r;
}

template <class T>
Matrix<T> Matrix<T>::operator-(const Matrix& b) const {
  if (rows_ != b.rows_ || cols_ != b.cols_) throw InvalidArgument("matrix difference: dimension mismatch");
  Matrix r = *this;
  for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - b.data_[i];
  return r;
}

template <class T>
Matrix<T> Matrix<T>::scaled(const T& s) const {
  Matrix r = *this;
  for (auto& v : r.data_) v = v * s;
  return r;
}

template <class T>
Matrix<T> Matrix<T>::transpose() const {
  Matrix r(cols_, rows_, zero_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

template <class T>
Matrix<T> Matrix<T>::block(size_t r0, size_t c0, size_t nr, size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw InvalidArgument("block out of range");
  Matrix r(nr, nc, zero_);
  for (size_t i = 0; i < nr; ++i)
    for (size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
  return r;
}

template <class T>
Matrix<T> Matrix<T>::hstack(const Matrix& b) const {
  if (rows_ != b.rows_) throw InvalidArgument("hstack: row mismatch");
  Matrix r(rows_, cols_ + b.cols_, zero_);
  r.set_block(0, 0, *this);
  r.set_block(0, cols_, b);
  return r;
}

template <class T>
Matrix<T> Matrix<T>::vstack(const Matrix& b) const {
  if (cols_ != b.cols_) throw InvalidArgument("vstack: column mismatch");
  Matrix r(rows_ + b.rows_, cols_, zero_);
  r.set_block(0, 0, *this);
  r.set_block(rows_, 0, b);
  return r;
}

template <class T>
Matrix<T> Matrix<T>::kron(const Matrix& b) const {
  Matrix r(rows_ * b.rows_, cols_ * b.cols_, zero_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) {
      const T& a = (*this)(i, j);
      if (a.is_zero()) continue;
      for (size_t k = 0; k < b.rows_; ++k)
        for (size_t l = 0; l < b.cols_; ++l) r(i * b.rows_ + k, j * b.cols_ + l) = a * b(k, l);
    }
  return r;
}

template <class T>
void Matrix<T>::set_block(size_t r0, size_t c0, const Matrix& b) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw InvalidArgument("set_block out of range");
  for (size_t i = 0; i < b.rows_; ++i)
    for (size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

template <class T>
void Matrix<T>::swap_rows(size_t a, size_t b) {
  if (a == b) return;
  for (size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

template <class T>
void Matrix<T>::swap_cols(size_t a, size_t b) {
  if (a == b) return;
  for (size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

template <class T>
bool Matrix<T>::is_zero() const {
  for (const auto& v : data_)
    if (!v.is_zero()) return false;
  return true;
}

template class Matrix<FieldElement>;
template class Matrix<Residue>;

ExactMatrix zero_matrix(const FieldContext& ctx, size_t rows, size_t cols) {
  return ExactMatrix(rows, cols, FieldElement::zero(ctx));
}

ExactMatrix identity_matrix(const FieldContext& ctx, size_t n) {
  ExactMatrix m = zero_matrix(ctx, n, n);
  const FieldElement one = FieldElement::one(ctx);
  for (size_t i = 0; i < n; ++i) m(i, i) = one;
  return m;
}

ExactMatrix matrix_from_ints(const FieldContext& ctx, size_t rows, size_t cols,
                             const std::vector<int64_t>& entries) {
  if (entries.size() != rows * cols) throw InvalidArgument("matrix_from_ints: wrong entry count");
  ExactMatrix m = zero_matrix(ctx, rows, cols);
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j) m(i, j) = FieldElement::from_int(ctx, entries[i * cols + j]);
  return m;
}

ResidueMatrix reduce_matrix(const ExactMatrix& a, int n) {
  ResidueMatrix r(a.rows(), a.cols(), Residue(a.zero().context(), n));
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) r(i, j) = reduce_mod(a(i, j), n);
  return r;
}

bool matrices_equal(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j)
      if (!(a(i, j) - b(i, j)).is_zero()) return false;
  return true;
}

int64_t min_ord(const ExactMatrix& a) {
  int64_t m = kInfiniteOrd;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j)
      if (!a(i, j).is_zero()) m = std::min(m, a(i, j).ord_lower_bound());
  return m;
}

bool divisible_by(const ExactMatrix& a, int64_t b) {
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) {
      const FieldElement& v = a(i, j);
      if (v.is_zero()) {
        if (v.abs_precision() < b)
          throw PrecisionError("entry known only modulo pi^" + std::to_string(v.abs_precision()) +
                               ", cannot test divisibility by pi^" + std::to_string(b));
        continue;
      }
      if (v.ord_lower_bound() < b) return false;
    }
  return true;
}

// --------------------------------------------------------------- elimination

namespace {

enum class Decision { Nonzero, Zero, Unknown };

struct ZeroTest {
  int64_t threshold = kInfiniteOrd;

  explicit ZeroTest(const ExactMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return;
    const int64_t m = min_ord(a);
    if (m >= kInfiniteOrd) {
      threshold = std::numeric_limits<int64_t>::min();
      return;
    }
    const int n = a.zero().context().precision();
    threshold = m + std::max(1, (n + 1) / 2);
  }

  Decision operator()(const FieldElement& x) const {
    if (!x.is_zero()) return Decision::Nonzero;
    if (x.abs_precision() >= threshold) return Decision::Zero;
    return Decision::Unknown;
  }
};

[[noreturn]] void undecidable(const char* what) {
  throw PrecisionError(std::string(what) + ": pivot undecidable at the working precision");
}

// Row reduction restricted to the first pivot_cols columns.
RowEchelon echelon_impl(ExactMatrix e, size_t pivot_cols) {
  const ZeroTest test(e);
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t j = 0; j < pivot_cols && r < e.rows(); ++j) {
    size_t best = e.rows();
    bool unknown = false;
    for (size_t i = r; i < e.rows(); ++i) {
      const Decision d = test(e(i, j));
      if (d == Decision::Unknown) unknown = true;
      if (d != Decision::Nonzero) continue;
      if (best == e.rows() || e(i, j).ord_lower_bound() < e(best, j).ord_lower_bound()) best = i;
    }
    if (best == e.rows()) {
      if (unknown) undecidable("row echelon");
      continue;
    }
    e.swap_rows(r, best);
    const FieldElement pivot_inv = e(r, j).inverse();
    for (size_t i = r + 1; i < e.rows(); ++i) {
      if (e(i, j).is_exact_zero()) continue;
      const FieldElement f = e(i, j) * pivot_inv;
      for (size_t k = j + 1; k < e.cols(); ++k) {
        if (!e(r, k).is_exact_zero()) e(i, k) = e(i, k) - f * e(r, k);
      }
      e(i, j) = FieldElement::zero(e.zero().context());
    }
    pivots.push_back(j);
    ++r;
  }
  return {std::move(e), std::move(pivots)};
}

}  // namespace

RowEchelon row_echelon(const ExactMatrix& a) { return echelon_impl(a, a.cols()); }

size_t rank(const ExactMatrix& a) { return row_echelon(a).pivots.size(); }

ExactMatrix kernel(const ExactMatrix& a) {
  const FieldContext& ctx = a.zero().context();
  const RowEchelon ech = row_echelon(a);
  const size_t n = a.cols();
  std::vector<bool> is_pivot(n, false);
  for (size_t c : ech.pivots) is_pivot[c] = true;
  std::vector<size_t> free;
  for (size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) free.push_back(c);
  ExactMatrix k = zero_matrix(ctx, n, free.size());
  for (size_t f = 0; f < free.size(); ++f) {
    std::vector<FieldElement> x(n, FieldElement::zero(ctx));
    x[free[f]] = FieldElement::one(ctx);
    for (size_t t = ech.pivots.size(); t-- > 0;) {
      const size_t pc = ech.pivots[t];
      FieldElement s = FieldElement::zero(ctx);
      for (size_t j = pc + 1; j < n; ++j)
        if (!x[j].is_exact_zero() && !ech.form(t, j).is_exact_zero()) s += ech.form(t, j) * x[j];
      x[pc] = s.is_exact_zero() ? s : -(s / ech.form(t, pc));
    }
    for (size_t i = 0; i < n; ++i) k(i, f) = x[i];
  }
  return k;
}

std::optional<ExactMatrix> solve(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows() != b.rows()) throw InvalidArgument("solve: row mismatch");
  const FieldContext& ctx = a.zero().context();
  const size_t n = a.cols();
  const ExactMatrix aug = a.hstack(b);
  const ZeroTest test(aug);
  const RowEchelon ech = echelon_impl(aug, n);
  const size_t r = ech.pivots.size();
  for (size_t i = r; i < aug.rows(); ++i)
    for (size_t j = n; j < aug.cols(); ++j) {
      const Decision d = test(ech.form(i, j));
      if (d == Decision::Nonzero) return std::nullopt;
      if (d == Decision::Unknown) undecidable("solve");
    }
  ExactMatrix x = zero_matrix(ctx, n, b.cols());
  for (size_t col = 0; col < b.cols(); ++col) {
    for (size_t t = r; t-- > 0;) {
      const size_t pc = ech.pivots[t];
      FieldElement s = ech.form(t, n + col);
      for (size_t j = pc + 1; j < n; ++j)
        if (!x(j, col).is_exact_zero() && !ech.form(t, j).is_exact_zero()) s -= ech.form(t, j) * x(j, col);
      x(pc, col) = s.is_exact_zero() ? s : s / ech.form(t, pc);
    }
  }
  return x;
}

ExactMatrix inverse(const ExactMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("inverse of a non-square matrix");
  const FieldContext& ctx = a.zero().context();
  if (rank(a) != a.rows()) throw DomainError("matrix is singular");
  auto x = solve(a, identity_matrix(ctx, a.rows()));
  if (!x) throw DomainError("matrix is singular");
  return *x;
}

ExactMatrix fixed_space(const std::vector<ExactMatrix>& gens) {
  if (gens.empty()) throw InvalidArgument("fixed_space needs at least one matrix");
  const FieldContext& ctx = gens.front().zero().context();
  const size_t n = gens.front().rows();
  const ExactMatrix id = identity_matrix(ctx, n);
  ExactMatrix stacked = zero_matrix(ctx, 0, n);
  for (const auto& g : gens) {
    if (g.rows() != n || g.cols() != n) throw InvalidArgument("fixed_space: size mismatch");
    stacked = stacked.vstack(g - id);
  }
  return kernel(stacked);
}

// ---------------------------------------------------------------------- SNF

namespace {

struct FieldOps {
  const FieldContext* ctx;
  explicit FieldOps(const FieldContext& c) : ctx(&c) {}
  static constexpr bool capped = false;
  FieldElement zero() const { return FieldElement::zero(*ctx); }
  FieldElement one() const { return FieldElement::one(*ctx); }
  FieldElement pi_power(int64_t v) const { return FieldElement::uniformizer(*ctx).pow(v); }
  FieldElement quotient(const FieldElement& a, const FieldElement& b) const { return a / b; }
  int64_t zero_marker() const { return kInfiniteOrd; }
};

struct ResidueOps {
  const FieldContext* ctx;
  int n;
  ResidueOps(const FieldContext& c, int n_) : ctx(&c), n(n_) {}
  static constexpr bool capped = true;
  Residue zero() const { return Residue(*ctx, n); }
  Residue one() const {
    Coeffs c{};
    c[0] = 1;
    return Residue::from_coeffs(*ctx, n, c);
  }
  Residue pi_power(int64_t v) const {
    return Residue::from_coeffs(*ctx, n, v >= n ? Coeffs{} : ctx->pi_power(v));
  }
  Residue quotient(const Residue& a, const Residue& b) const {
    if (a.is_zero()) return zero();
    return reduce_mod(a.lift() / b.lift(), n);
  }
  int64_t zero_marker() const { return n; }
};

template <class T>
bool exact_zero(const T& x) {
  if constexpr (std::is_same_v<T, FieldElement>) {
    return x.is_exact_zero();
  } else {
    return x.is_zero();
  }
}

template <class T, class Ops>
SmithForm<T> smith_impl(Matrix<T> a, const Ops& ops, bool transforms,
                        const std::function<Decision(const T&)>& decide,
                        const std::function<int64_t(const T&)>& ord,
                        const std::function<int64_t(const T&)>& lower_bound_of_zero) {
  const size_t r = a.rows(), c = a.cols();
  SmithForm<T> out;
  if (transforms) {
    out.U = Matrix<T>(r, r, ops.zero());
    out.V = Matrix<T>(c, c, ops.zero());
    for (size_t i = 0; i < r; ++i) out.U(i, i) = ops.one();
    for (size_t i = 0; i < c; ++i) out.V(i, i) = ops.one();
  }
  const size_t steps = std::min(r, c);
  size_t t = 0;
  for (; t < steps; ++t) {
    size_t bi = r, bj = c;
    int64_t best = kInfiniteOrd;
    int64_t weakest_zero = kInfiniteOrd;
    bool unknown = false;
    for (size_t i = t; i < r; ++i)
      for (size_t j = t; j < c; ++j) {
        const Decision d = decide(a(i, j));
        if (d == Decision::Unknown) {
          unknown = true;
          weakest_zero = std::min(weakest_zero, lower_bound_of_zero(a(i, j)));
        }
        if (d != Decision::Nonzero) continue;
        const int64_t v = ord(a(i, j));
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (bi == r) {
      if (unknown) undecidable("smith normal form");
      break;
    }
    if (unknown && weakest_zero < best) undecidable("smith normal form");
    a.swap_rows(t, bi);
    a.swap_cols(t, bj);
    if (transforms) {
      out.U.swap_rows(t, bi);
      out.V.swap_cols(t, bj);
    }
    const T target = ops.pi_power(best);
    const T s = ops.quotient(target, a(t, t));
    for (size_t j = t; j < c; ++j)
      if (!exact_zero(a(t, j))) a(t, j) = a(t, j) * s;
    if (transforms)
      for (size_t j = 0; j < r; ++j) out.U(t, j) = out.U(t, j) * s;
    a(t, t) = target;
    for (size_t i = t + 1; i < r; ++i) {
      if (exact_zero(a(i, t))) continue;
      const T f = ops.quotient(a(i, t), target);
      for (size_t j = t + 1; j < c; ++j)
        if (!exact_zero(a(t, j))) a(i, j) = a(i, j) - f * a(t, j);
      a(i, t) = ops.zero();
      if (transforms)
        for (size_t j = 0; j < r; ++j)
          if (!exact_zero(out.U(t, j))) out.U(i, j) = out.U(i, j) - f * out.U(t, j);
    }
    for (size_t j = t + 1; j < c; ++j) {
      if (exact_zero(a(t, j))) continue;
      const T f = ops.quotient(a(t, j), target);
      a(t, j) = ops.zero();
      if (transforms)
        for (size_t i = 0; i < c; ++i)
          if (!exact_zero(out.V(i, t))) out.V(i, j) = out.V(i, j) - f * out.V(i, t);
    }
    out.invariants.push_back(best);
  }
  for (; t < steps; ++t) out.invariants.push_back(ops.zero_marker());
  // entries left in the trailing block are zero to the decided precision
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j)
      if (i != j || i >= out.invariants.size() || out.invariants[i] == ops.zero_marker()) a(i, j) = ops.zero();
  out.D = std::move(a);
  return out;
}

}  // namespace

SmithForm<FieldElement> smith_normal_form(const ExactMatrix& a, bool with_transforms) {
  const FieldContext& ctx = a.zero().context();
  if (min_ord(a) < 0) throw DomainError("smith normal form needs integral entries");
  const ZeroTest test(a);
  return smith_impl<FieldElement>(
      a, FieldOps(ctx), with_transforms, [&](const FieldElement& x) { return test(x); },
      [](const FieldElement& x) { return x.ord_lower_bound(); },
      [](const FieldElement& x) { return x.abs_precision(); });
}

SmithForm<Residue> smith_normal_form(const ResidueMatrix& a, bool with_transforms) {
  const FieldContext& ctx = a.zero().context();
  const int n = a.zero().exponent();
  return smith_impl<Residue>(
      a, ResidueOps(ctx, n), with_transforms,
      [](const Residue& x) { return x.is_zero() ? Decision::Zero : Decision::Nonzero; },
      [](const Residue& x) { return x.ord(); }, [n](const Residue&) { return int64_t{n}; });
}

ExactMatrix saturate(const ExactMatrix& k) {
  const FieldContext& ctx = k.zero().context();
  if (k.cols() == 0) return k;
  const int64_t m = min_ord(k);
  if (m >= kInfiniteOrd) return zero_matrix(ctx, k.rows(), 0);
  const ExactMatrix scaled = k.scaled(FieldElement::uniformizer(ctx).pow(-m));
  const auto snf = smith_normal_form(scaled, true);
  size_t r = 0;
  for (auto v : snf.invariants)
    if (v != kInfiniteOrd) ++r;
  const ExactMatrix uinv = inverse(snf.U);
  return uinv.block(0, 0, uinv.rows(), r);
}

ExactMatrix preimage_lattice(const ExactMatrix& c) {
  const FieldContext& ctx = c.zero().context();
  if (c.cols() == 0) return c;
  const int64_t m = min_ord(c);
  if (m >= kInfiniteOrd) throw DomainError("preimage_lattice needs full column rank");
  const FieldElement shift = FieldElement::uniformizer(ctx).pow(-m);
  const auto snf = smith_normal_form(c.scaled(shift), true);
  // U (c pi^-m) V = D, so c y is integral iff the i-th entry of V^-1 y lies in pi^(m - d_i)
  ExactMatrix scale = zero_matrix(ctx, c.cols(), c.cols());
  for (size_t i = 0; i < c.cols(); ++i) {
    const int64_t d = snf.invariants.at(i);
    if (d == kInfiniteOrd) throw DomainError("preimage_lattice needs full column rank");
    scale(i, i) = FieldElement::uniformizer(ctx).pow(-m - d);
  }
  return snf.V * scale;
}

// ----------------------------------------------------------------- Lattice

namespace {

// Column echelon over o_L with minimal-valuation pivots; pivot entries
// are normalised to powers of pi.
ExactMatrix column_echelon(ExactMatrix e) {
  const FieldContext& ctx = e.zero().context();
  const ZeroTest test(e);
  size_t t = 0;
  for (size_t i = 0; i < e.rows() && t < e.cols(); ++i) {
    size_t best = e.cols();
    int64_t weakest_zero = kInfiniteOrd;
    bool unknown = false;
    for (size_t j = t; j < e.cols(); ++j) {
      const Decision d = test(e(i, j));
      if (d == Decision::Unknown) {
        unknown = true;
        weakest_zero = std::min(weakest_zero, e(i, j).abs_precision());
      }
      if (d != Decision::Nonzero) continue;
      if (best == e.cols() || e(i, j).ord_lower_bound() < e(i, best).ord_lower_bound()) best = j;
    }
    if (best == e.cols()) {
      if (unknown) undecidable("lattice basis");
      continue;
    }
    if (unknown && weakest_zero < e(i, best).ord_lower_bound()) undecidable("lattice basis");
    e.swap_cols(t, best);
    const int64_t v = e(i, t).ord();
    const FieldElement target = FieldElement::uniformizer(ctx).pow(v);
    const FieldElement s = target / e(i, t);
    for (size_t r = 0; r < e.rows(); ++r)
      if (!e(r, t).is_exact_zero()) e(r, t) = e(r, t) * s;
    e(i, t) = target;
    for (size_t j = t + 1; j < e.cols(); ++j) {
      if (e(i, j).is_exact_zero()) continue;
      const FieldElement f = e(i, j) / target;
      for (size_t r = i + 1; r < e.rows(); ++r)
        if (!e(r, t).is_exact_zero()) e(r, j) = e(r, j) - f * e(r, t);
      e(i, j) = FieldElement::zero(ctx);
    }
    ++t;
  }
  return e.block(0, 0, e.rows(), t);
}

}  // namespace

Lattice Lattice::from_generators(const ExactMatrix& gens) {
  Lattice l;
  l.ctx_ = &gens.zero().context();
  l.basis_ = column_echelon(gens);
  // a full lattice contains p^D o^n; entries known modulo p^{D+1} can be
  // replaced by exact lifts without changing the lattice
  if (l.basis_.rows() == l.basis_.cols() && l.basis_.rows() > 0) {
    const ExactMatrix inv = inverse(l.basis_);
    int64_t d = std::numeric_limits<int64_t>::min();
    for (size_t i = 0; i < inv.rows(); ++i)
      for (size_t j = 0; j < inv.cols(); ++j)
        if (!inv(i, j).is_exact_zero()) d = std::max(d, -inv(i, j).ord_lower_bound());
    bool safe = true;
    for (size_t i = 0; i < l.basis_.rows() && safe; ++i)
      for (size_t j = 0; j < l.basis_.cols() && safe; ++j)
        if (!l.basis_(i, j).is_exact_zero() && l.basis_(i, j).abs_precision() <= d) safe = false;
    if (safe)
      for (size_t i = 0; i < l.basis_.rows(); ++i)
        for (size_t j = 0; j < l.basis_.cols(); ++j) l.basis_(i, j) = l.basis_(i, j).lifted();
  }
  return l;
}

Lattice Lattice::standard(const FieldContext& ctx, size_t dim) {
  Lattice l;
  l.ctx_ = &ctx;
  l.basis_ = identity_matrix(ctx, dim);
  return l;
}

std::optional<ExactMatrix> Lattice::coordinates(const ExactMatrix& vectors) const {
  if (vectors.rows() != ambient_dim()) throw InvalidArgument("lattice coordinates: dimension mismatch");
  return solve(basis_, vectors);
}

bool Lattice::contains(const ExactMatrix& vectors) const {
  auto c = coordinates(vectors);
  if (!c) return false;
  for (size_t i = 0; i < c->rows(); ++i)
    for (size_t j = 0; j < c->cols(); ++j) {
      const FieldElement& v = (*c)(i, j);
      if (v.is_zero()) {
        if (v.abs_precision() < 0) undecidable("lattice membership");
        continue;
      }
      if (v.ord_lower_bound() < 0) return false;
    }
  return true;
}

Lattice Lattice::image(const ExactMatrix& g) const { return from_generators(g * basis_); }

Lattice Lattice::scaled(const FieldElement& s) const { return from_generators(basis_.scaled(s)); }

Lattice lattice_sum(const Lattice& a, const Lattice& b) {
  return Lattice::from_generators(a.basis().hstack(b.basis()));
}

Lattice lattice_intersect(const Lattice& a, const Lattice& b) {
  const FieldContext& ctx = a.context();
  if (a.ambient_dim() != b.ambient_dim()) throw InvalidArgument("lattice_intersect: dimension mismatch");
  if (a.rank() == 0 || b.rank() == 0) return Lattice::from_generators(zero_matrix(ctx, a.ambient_dim(), 0));
  const ExactMatrix minus_b = b.basis().scaled(-FieldElement::one(ctx));
  const ExactMatrix k = kernel(a.basis().hstack(minus_b));
  if (k.cols() == 0) return Lattice::from_generators(zero_matrix(ctx, a.ambient_dim(), 0));
  const ExactMatrix sat = saturate(k);
  const ExactMatrix y = sat.block(0, 0, a.rank(), sat.cols());
  return Lattice::from_generators(a.basis() * y);
}

namespace {

std::optional<std::vector<int64_t>> inclusion_index(const Lattice& a, const Lattice& b) {
  if (!b.contains(a.basis())) return std::nullopt;
  if (a.rank() == 0) return std::vector<int64_t>{};
  auto c = b.coordinates(a.basis());
  return smith_normal_form(*c, false).invariants;
}

}  // namespace

LatticeComparison lattice_compare(const Lattice& a, const Lattice& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw InvalidArgument("lattice_compare: dimension mismatch");
  auto ab = inclusion_index(a, b);
  auto ba = inclusion_index(b, a);
  LatticeComparison out;
  if (ab && ba) {
    out.relation = Containment::Equal;
    out.index = *ab;
  } else if (ab) {
    out.relation = Containment::FirstInSecond;
    out.index = *ab;
  } else if (ba) {
    out.relation = Containment::SecondInFirst;
    out.index = *ba;
  }
  return out;
}

const char* containment_name(Containment c) {
  switch (c) {
    case Containment::Equal:
      return "equal";
    case Containment::FirstInSecond:
      return "first_in_second";
    case Containment::SecondInFirst:
      return "second_in_first";
    case Containment::Incomparable:
      return "incomparable";
  }
  return "?";
}

namespace {

ExactMatrix splitting_basis(const ExactMatrix& u1, const ExactMatrix& u2) {
  if (u1.rows() != u2.rows()) throw InvalidArgument("splitting: dimension mismatch");
  const ExactMatrix s = u1.hstack(u2);
  if (s.rows() != s.cols() || rank(s) != s.rows())
    throw InvalidArgument("U1 and U2 are not complementary subspaces");
  return s;
}

}  // namespace

ExactMatrix phi_x_matrix(const FieldElement& x, const ExactMatrix& u1, const ExactMatrix& u2) {
  if (!x.is_unit()) throw DomainError("phi_x needs a unit x");
  const FieldContext& ctx = x.context();
  const ExactMatrix s = splitting_basis(u1, u2);
  ExactMatrix d = identity_matrix(ctx, s.rows());
  for (size_t i = 0; i < u1.cols(); ++i) d(i, i) = x;
  return s * d * inverse(s);
}

ExactMatrix apply_phi_x(const ExactMatrix& v, const FieldElement& x, const ExactMatrix& u1,
                        const ExactMatrix& u2) {
  return phi_x_matrix(x, u1, u2) * v;
}

Lattice apply_phi_x(const Lattice& m, const FieldElement& x, const ExactMatrix& u1, const ExactMatrix& u2) {
  return m.image(phi_x_matrix(x, u1, u2));
}

int deformation_bound(const Lattice& m, const ExactMatrix& u1, const ExactMatrix& u2) {
  const FieldContext& ctx = m.context();
  const ExactMatrix s = splitting_basis(u1, u2);
  const ExactMatrix sinv = inverse(s);
  ExactMatrix proj1 = zero_matrix(ctx, s.rows(), s.rows());
  for (size_t i = 0; i < u1.cols(); ++i) proj1(i, i) = FieldElement::one(ctx);
  const ExactMatrix p1 = s * proj1 * sinv;
  const ExactMatrix p2 = identity_matrix(ctx, s.rows()) - p1;
  const ExactMatrix image = p1 * m.basis();
  const ExactMatrix k = kernel(p2 * m.basis());
  const Lattice in_u1 = Lattice::from_generators(m.basis() * saturate(k));
  auto c = in_u1.coordinates(image);
  if (!c) throw DomainError("M cap U1 does not span the projection of M; M is not a full lattice");
  const int64_t mo = min_ord(*c);
  if (mo >= kInfiniteOrd) return 1;
  return static_cast<int>(std::max<int64_t>(1, -mo));
}

}  // namespace padicdiag
