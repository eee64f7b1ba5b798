#include "padicdiag/tree_homology.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace padicdiag {

namespace {

mpq_class pq(uint64_t p) { return mpq_class(static_cast<unsigned long>(p)); }

// the p+1 neighbours of o^2 are h o^2; k h-edge: k Pi = h
std::vector<QMatrix2> neighbour_steps(uint64_t p) {
  std::vector<QMatrix2> out;
  for (uint64_t t = 0; t < p; ++t) out.push_back({pq(p), mpq_class(static_cast<unsigned long>(t)), 0, 1});
  out.push_back({1, 0, 0, pq(p)});
  return out;
}

std::vector<QMatrix2> edge_twists(uint64_t p) {
  std::vector<QMatrix2> out;
  for (uint64_t t = 0; t < p; ++t) out.push_back({mpq_class(static_cast<unsigned long>(t)), 1, 1, 0});
  out.push_back(QMatrix2::identity());
  return out;
}

int delta(const QMatrix2& k, uint64_t p) { return padic_val(k.det(), p) % 2 == 0 ? 1 : -1; }

struct Chain {
  std::map<size_t, ExactMatrix> blocks;
};

class BoundaryEvaluator {
 public:
  BoundaryEvaluator(const Diagram& d, const TreeBall& ball, const BoundaryOptions& opt)
      : d_(d), ball_(ball), opt_(opt), pi_inv_(inverse(d.pi())) {}

  // [h, w] resolved at its stored vertex
  bool add_term(Chain& c, const QMatrix2& h, const ExactMatrix& w) const {
    const auto idx = ball_.find_vertex(h);
    if (!idx) return false;
    const ExactMatrix moved = d_.action0(ball_.vertex(*idx).inverse() * h) * w;
    auto it = c.blocks.find(*idx);
    if (it == c.blocks.end())
      c.blocks.emplace(*idx, moved);
    else
      it->second = it->second + moved;
    return true;
  }

  std::optional<Chain> boundary(const QMatrix2& g, const ExactMatrix& v) const {
    Chain c;
    const QMatrix2 gpi = g * QMatrix2::pi(d_.p());
    ExactMatrix far = d_.r() * (pi_inv_ * v);
    if (!opt_.flip_sign) far = far.scaled(-FieldElement::one(d_.context()));
    if (!add_term(c, g, d_.r() * v) || !add_term(c, gpi, far)) return std::nullopt;
    return c;
  }

  std::optional<Chain> translate(const QMatrix2& h, const Chain& c) const {
    Chain out;
    for (const auto& [idx, w] : c.blocks)
      if (!add_term(out, h * ball_.vertex(idx), w)) return std::nullopt;
    return out;
  }

  ExactMatrix flatten(const Chain& c, size_t cols) const {
    ExactMatrix out = zero_matrix(d_.context(), ball_.n_vertices() * d_.dim0(), cols);
    for (const auto& [idx, w] : c.blocks) out.set_block(idx * d_.dim0(), 0, w);
    return out;
  }

 private:
  const Diagram& d_;
  const TreeBall& ball_;
  BoundaryOptions opt_;
  ExactMatrix pi_inv_;
};

ExactMatrix assemble(const Diagram& d, const TreeBall& ball, const BoundaryOptions& opt, const ExactMatrix* l0_inv,
                     const ExactMatrix* l1) {
  const size_t n0 = d.dim0(), n1 = d.dim1();
  ExactMatrix out = zero_matrix(d.context(), ball.n_vertices() * n0, ball.n_edges() * n1);
  const BoundaryEvaluator ev(d, ball, opt);
  const ExactMatrix basis = l1 ? *l1 : identity_matrix(d.context(), n1);
  for (size_t e = 0; e < ball.n_edges(); ++e) {
    const auto c = ev.boundary(ball.edges()[e].g, basis);
    if (!c) throw InternalError("edge endpoint outside the ball");
    for (const auto& [idx, w] : c->blocks) out.set_block(idx * n0, e * n1, l0_inv ? *l0_inv * w : w);
  }
  return out;
}

std::vector<int64_t> capped_invariants(const std::vector<int64_t>& inv, int n) {
  std::vector<int64_t> out;
  for (int64_t v : inv) out.push_back(std::min<int64_t>(v, n));
  std::sort(out.begin(), out.end());
  return out;
}

QMatrix2 random_iz(std::mt19937_64& rng, uint64_t p) {
  std::uniform_int_distribution<int64_t> dist(-40, 40);
  std::uniform_int_distribution<int> zd(-1, 1);
  const int64_t ip = static_cast<int64_t>(p);
  for (;;) {
    const QMatrix2 k{mpq_class(dist(rng)), mpq_class(dist(rng)), mpq_class(dist(rng) * ip), mpq_class(dist(rng))};
    if (k.det() != 0 && padic_val(k.det(), p) == 0) return k.scaled(p_power(p, zd(rng)));
  }
}

QMatrix2 random_k(std::mt19937_64& rng, uint64_t p) {
  std::uniform_int_distribution<int64_t> dist(-40, 40);
  for (;;) {
    const QMatrix2 k{mpq_class(dist(rng)), mpq_class(dist(rng)), mpq_class(dist(rng)), mpq_class(dist(rng))};
    if (k.in_gl2_zp(p)) return k;
  }
}

}  // namespace

VertexKey vertex_key(const QMatrix2& g, uint64_t p) {
  const mpq_class det = g.det();
  if (det == 0) throw DomainError("singular group element");
  // column Hermite form [[p^alpha, beta], [0, p^gamma]] of the lattice g o^2
  mpq_class ratio;
  int64_t gamma;
  if (g.c == 0 || (g.d != 0 && padic_val(g.d, p) <= padic_val(g.c, p))) {
    gamma = padic_val(g.d, p);
    ratio = g.b / g.d;
  } else {
    gamma = padic_val(g.c, p);
    ratio = g.a / g.c;
  }
  VertexKey key;
  key.n = padic_val(det, p) - 2 * gamma;
  // ratio mod p^n, with the p-power denominator cleared first
  int64_t s = std::max<int64_t>(-key.n, 0);
  if (ratio != 0) s = std::max<int64_t>(s, -padic_val(ratio, p));
  const int64_t level = key.n + s;
  if (level > 36) throw DomainError("vertex too far from the standard vertex");
  if (level <= 0) {
    key.b = 0;
  } else {
    const mpq_class scaled = ratio * p_power(p, s);
    key.b = mpq_class(static_cast<unsigned long>(residue_mod(scaled, p, static_cast<int>(level)))) / p_power(p, s);
    key.b.canonicalize();
  }
  return key;
}

int64_t vertex_distance(const VertexKey& v, uint64_t p) {
  int64_t m = std::min<int64_t>(v.n, 0);
  if (v.b != 0) m = std::min(m, padic_val(v.b, p));
  return v.n - 2 * m;
}

std::optional<size_t> TreeBall::find_vertex(const QMatrix2& g) const {
  const VertexKey k = vertex_key(g, p_);
  if (vertex_distance(k, p_) > radius_) return std::nullopt;
  auto it = index_.find(k);
  if (it == index_.end()) throw InternalError("vertex inside the radius missing from the ball");
  return it->second;
}

TreeBall enumerate_ball(uint64_t p, int radius, size_t max_vertices) {
  if (radius < 0) throw InvalidArgument("radius must be non-negative");
  if (p < 3 || !is_prime(p)) throw InvalidArgument("p must be an odd prime");
  // 1 + (p+1)(p^R - 1)/(p - 1) vertices
  long double expected = 1;
  long double shell = static_cast<long double>(p + 1);
  for (int i = 1; i <= radius; ++i) {
    expected += shell;
    shell *= static_cast<long double>(p);
  }
  if (expected > static_cast<long double>(max_vertices))
    throw DomainError("ball of radius " + std::to_string(radius) + " exceeds the vertex cap");
  TreeBall ball;
  ball.p_ = p;
  ball.radius_ = radius;
  const auto steps = neighbour_steps(p);
  const auto twists = edge_twists(p);
  auto add_vertex = [&](const VertexKey& k) {
    const QMatrix2 rep{p_power(p, k.n), k.b, 0, 1};
    ball.index_.emplace(k, ball.reps_.size());
    ball.reps_.push_back(rep);
    ball.keys_.push_back(k);
    return ball.reps_.size() - 1;
  };
  add_vertex(vertex_key(QMatrix2::identity(), p));
  std::set<std::pair<size_t, size_t>> seen;
  for (size_t cur = 0; cur < ball.reps_.size(); ++cur) {
    const QMatrix2 g = ball.reps_[cur];
    for (size_t s = 0; s < steps.size(); ++s) {
      const VertexKey k = vertex_key(g * steps[s], p);
      if (vertex_distance(k, p) > radius) continue;
      auto it = ball.index_.find(k);
      const size_t nb = it == ball.index_.end() ? add_vertex(k) : it->second;
      if (!seen.insert({std::min(cur, nb), std::max(cur, nb)}).second) continue;
      ball.edges_.push_back({g * twists[s], cur, nb});
    }
  }
  return ball;
}

std::optional<ExactMatrix> boundary_of(const Diagram& d, const TreeBall& ball, const QMatrix2& g,
                                       const ExactMatrix& v, const BoundaryOptions& opt) {
  const BoundaryEvaluator ev(d, ball, opt);
  const auto c = ev.boundary(g, v);
  if (!c) return std::nullopt;
  return ev.flatten(*c, v.cols());
}

ExactMatrix boundary_matrix(const Diagram& d, const TreeBall& ball, const BoundaryOptions& opt) {
  if (d.p() != ball.p()) throw InvalidArgument("diagram and ball over different primes");
  return assemble(d, ball, opt, nullptr, nullptr);
}

ExactMatrix boundary_matrix(const IntegralDiagram& d, const TreeBall& ball, const BoundaryOptions& opt) {
  if (d.diagram.p() != ball.p()) throw InvalidArgument("diagram and ball over different primes");
  const ExactMatrix l0_inv = inverse(d.l0.basis());
  return assemble(d.diagram, ball, opt, &l0_inv, &d.l1.basis());
}

AxiomReport check_boundary_welldefined(const Diagram& d, const TreeBall& ball, int samples, uint64_t seed,
                                       const BoundaryOptions& opt) {
  AxiomReport rep;
  if (ball.n_edges() == 0) {
    rep.checks.push_back({"boundary_welldefined", true, "no edges"});
    return rep;
  }
  const uint64_t p = d.p();
  const FieldContext& ctx = d.context();
  const BoundaryEvaluator ev(d, ball, opt);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick_edge(0, ball.n_edges() - 1);
  std::uniform_int_distribution<int64_t> coef(-9, 9);
  auto random_vector = [&] {
    ExactMatrix v = zero_matrix(ctx, d.dim1(), 1);
    for (size_t i = 0; i < d.dim1(); ++i) v(i, 0) = FieldElement::from_int(ctx, coef(rng));
    return v;
  };
  auto same = [&](const Chain& x, const Chain& y) {
    return matrices_equal(ev.flatten(x, 1), ev.flatten(y, 1));
  };
  const QMatrix2 pi = QMatrix2::pi(p);

  // d[g k, delta(k) k^{-1} v] = d[g, v]
  int used = 0, bad = 0;
  std::string first_bad;
  // draw until `samples` draws stay inside the ball
  const int max_draws = 50 * samples;
  for (int s = 0; s < max_draws && used < samples; ++s) {
    QMatrix2 k;
    switch (s % 4) {
      case 0: k = random_iz(rng, p); break;
      case 1: k = pi; break;
      case 2: k = random_iz(rng, p) * pi; break;
      default: k = pi.inverse() * random_iz(rng, p); break;
    }
    const QMatrix2 g = ball.edges()[pick_edge(rng)].g;
    const ExactMatrix v = random_vector();
    ExactMatrix moved = d.action1(k.inverse()) * v;
    if (delta(k, p) < 0) moved = moved.scaled(-FieldElement::one(ctx));
    const auto lhs = ev.boundary(g * k, moved);
    const auto rhs = ev.boundary(g, v);
    if (!lhs || !rhs) continue;
    ++used;
    if (!same(*lhs, *rhs)) {
      if (bad++ == 0) first_bad = "k = " + k.to_string();
    }
  }
  rep.checks.push_back({"boundary_welldefined", bad == 0 && used == samples,
                        std::to_string(used) + " samples, " + std::to_string(bad) + " failures" +
                            (first_bad.empty() ? "" : ", first at " + first_bad)});

  // d[h g, v] = h d[g, v]
  used = 0;
  bad = 0;
  const QMatrix2 shift{pq(p), 0, 0, 1};
  for (int s = 0; s < max_draws && used < samples; ++s) {
    QMatrix2 h;
    switch (s % 3) {
      case 0: h = random_k(rng, p); break;
      case 1: h = pi; break;
      default: h = shift; break;
    }
    const QMatrix2 g = ball.edges()[pick_edge(rng)].g;
    const ExactMatrix v = random_vector();
    const auto base = ev.boundary(g, v);
    const auto lhs = ev.boundary(h * g, v);
    if (!base || !lhs) continue;
    const auto rhs = ev.translate(h, *base);
    if (!rhs) continue;
    ++used;
    if (!same(*lhs, *rhs)) ++bad;
  }
  rep.checks.push_back({"boundary_equivariant", bad == 0 && used == samples,
                        std::to_string(used) + " samples, " + std::to_string(bad) + " failures"});
  return rep;
}

namespace {

HomologyReport report_of(const ExactMatrix& m, const TreeBall& ball) {
  HomologyReport r;
  r.n_vertices = ball.n_vertices();
  r.n_edges = ball.n_edges();
  r.rows = m.rows();
  r.cols = m.cols();
  r.rank = m.rows() == 0 || m.cols() == 0 ? 0 : rank(m);
  r.ker_dim = r.cols - r.rank;
  return r;
}

}  // namespace

HomologyReport homology_report(const Diagram& d, const TreeBall& ball, const BoundaryOptions& opt) {
  return report_of(boundary_matrix(d, ball, opt), ball);
}

HomologyReport homology_report(const IntegralDiagram& d, const TreeBall& ball, const BoundaryOptions& opt) {
  const ExactMatrix m = boundary_matrix(d, ball, opt);
  HomologyReport r;
  r.n_vertices = ball.n_vertices();
  r.n_edges = ball.n_edges();
  r.rows = m.rows();
  r.cols = m.cols();
  r.integral = true;
  if (m.rows() == 0 || m.cols() == 0) {
    r.ker_dim = r.cols;
    r.coker_free_rank = m.rows();
    return r;
  }
  // full pivoting keeps the inexact lattice coordinates decidable where row echelon is not
  const auto snf = smith_normal_form(m, false);
  for (int64_t v : snf.invariants) {
    if (v >= kInfiniteOrd) continue;
    ++r.rank;
    if (v > 0) r.coker_invariants.push_back(v);
  }
  r.ker_dim = r.cols - r.rank;
  r.coker_free_rank = m.rows() - r.rank;
  return r;
}

bool reduction_compatible(const ExactMatrix& m, const ResidueMatrix& reduced, int n) {
  if (m.rows() != reduced.rows() || m.cols() != reduced.cols()) throw InvalidArgument("shape mismatch");
  if (m.rows() == 0 || m.cols() == 0) return true;
  const auto over_o = smith_normal_form(m, false);
  const auto mod_n = smith_normal_form(reduced, false);
  return capped_invariants(over_o.invariants, n) == capped_invariants(mod_n.invariants, n);
}

bool reduction_compat(const IntegralDiagram& d, const TreeBall& ball, int n) {
  return reduction_compat(d, ball, std::vector<int>{n}).front();
}

std::vector<bool> reduction_compat(const IntegralDiagram& d, const TreeBall& ball, const std::vector<int>& ns) {
  for (int n : ns) {
    if (n < 1) throw InvalidArgument("n must be positive");
    if (n > d.diagram.context().precision()) throw PrecisionError("n exceeds the working precision");
  }
  const ExactMatrix m = boundary_matrix(d, ball);
  std::vector<bool> out;
  if (m.rows() == 0 || m.cols() == 0) return std::vector<bool>(ns.size(), true);
  const auto over_o = smith_normal_form(m, false);
  for (int n : ns) {
    const auto mod_n = smith_normal_form(reduce_matrix(m, n), false);
    out.push_back(capped_invariants(over_o.invariants, n) == capped_invariants(mod_n.invariants, n));
  }
  return out;
}

}  // namespace padicdiag
