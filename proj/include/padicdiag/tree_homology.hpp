#pragma once

// Chains on a ball of the Bruhat-Tits tree with coefficients in a diagram.
//
// A vertex is the class of g o^2 up to scalars, stored through the
// representative [[p^n, b], [0, 1]] with b taken mod p^n. An edge g stands
// for the pair {g o^2, g Pi o^2}. Chains use [g k, v] = [g, k v] for k in KZ
// on vertices and [g k, v] = [g, delta(k) k v] for k in the normalizer of I
// on edges, delta(k) = (-1)^{val det k}. The boundary is
//   d[g, v] = [g, r v] - [g Pi, r(Pi^{-1} v)].

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "padicdiag/diagrams.hpp"

namespace padicdiag {

struct VertexKey {
  int64_t n = 0;
  mpq_class b = 0;  // canonical in [0, p^n) after clearing p-power denominators
  friend bool operator<(const VertexKey& x, const VertexKey& y) {
    return x.n != y.n ? x.n < y.n : cmp(x.b, y.b) < 0;
  }
  friend bool operator==(const VertexKey& x, const VertexKey& y) { return x.n == y.n && x.b == y.b; }
};

VertexKey vertex_key(const QMatrix2& g, uint64_t p);
/// Distance from the standard vertex o^2.
int64_t vertex_distance(const VertexKey& v, uint64_t p);

struct TreeEdge {
  QMatrix2 g;
  size_t source = 0;  // vertex of g
  size_t target = 0;  // vertex of g Pi
};

class TreeBall {
 public:
  uint64_t p() const { return p_; }
  int radius() const { return radius_; }
  size_t n_vertices() const { return reps_.size(); }
  size_t n_edges() const { return edges_.size(); }
  const QMatrix2& vertex(size_t i) const { return reps_[i]; }
  const VertexKey& key(size_t i) const { return keys_[i]; }
  const std::vector<TreeEdge>& edges() const { return edges_; }
  /// Index of the vertex g o^2, or nullopt outside the ball.
  std::optional<size_t> find_vertex(const QMatrix2& g) const;

 private:
  friend TreeBall enumerate_ball(uint64_t p, int radius, size_t max_vertices);
  uint64_t p_ = 2;
  int radius_ = 0;
  std::vector<QMatrix2> reps_;
  std::vector<VertexKey> keys_;
  std::map<VertexKey, size_t> index_;
  std::vector<TreeEdge> edges_;
};

/// Vertices within distance radius and the edges joining two of them.
TreeBall enumerate_ball(uint64_t p, int radius, size_t max_vertices = 200000);

struct BoundaryOptions {
  bool flip_sign = false;  // d[g, v] = [g, r v] + [...], for mutation tests
};

/// Rows: vertex blocks of size dim D0, columns: edge blocks of size dim D1.
ExactMatrix boundary_matrix(const Diagram& d, const TreeBall& ball, const BoundaryOptions& opt = {});
/// Same map in the bases of l1 (edges) and l0 (vertices).
ExactMatrix boundary_matrix(const IntegralDiagram& d, const TreeBall& ball, const BoundaryOptions& opt = {});

/// d[g, v] as a column over all vertex blocks; nullopt if an endpoint leaves the ball.
std::optional<ExactMatrix> boundary_of(const Diagram& d, const TreeBall& ball, const QMatrix2& g,
                                       const ExactMatrix& v, const BoundaryOptions& opt = {});

/// d[g k, delta(k) k^{-1} v] = d[g, v] for k in IZ, Pi^{+-1} and products,
/// and d[h g, v] = h d[g, v] for h in K, Pi, diag(p, 1) when everything
/// stays in the ball. Each check reports how many samples were usable.
AxiomReport check_boundary_welldefined(const Diagram& d, const TreeBall& ball, int samples, uint64_t seed,
                                       const BoundaryOptions& opt = {});

struct HomologyReport {
  size_t n_vertices = 0, n_edges = 0;
  size_t rows = 0, cols = 0;
  size_t rank = 0, ker_dim = 0;
  bool integral = false;
  /// nonzero Smith invariants of the integral boundary (valuations)
  std::vector<int64_t> coker_invariants;
  size_t coker_free_rank = 0;
};

HomologyReport homology_report(const Diagram& d, const TreeBall& ball, const BoundaryOptions& opt = {});
HomologyReport homology_report(const IntegralDiagram& d, const TreeBall& ball, const BoundaryOptions& opt = {});

/// Smith invariants of m over o_L capped at n agree with those of the residue matrix.
bool reduction_compatible(const ExactMatrix& m, const ResidueMatrix& reduced, int n);
/// reduction_compatible for the integral boundary and its reduction mod p^n.
bool reduction_compat(const IntegralDiagram& d, const TreeBall& ball, int n);
/// One entry per n; the Smith form over o_L is computed once.
std::vector<bool> reduction_compat(const IntegralDiagram& d, const TreeBall& ball, const std::vector<int>& ns);

}  // namespace padicdiag
