#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cnbt/error.hpp"
#include "cnbt/graph.hpp"

namespace cnbt {

using Complex = std::complex<double>;
using SparseC = Eigen::SparseMatrix<Complex>;
using SparseR = Eigen::SparseMatrix<double>;

inline constexpr int kMaxRotation = 64;

/// A unit-modulus complex number together with its order R (smallest
/// positive R with alpha^R = 1).
struct UnitRoot {
  Complex alpha{1.0, 0.0};
  int R = 1;

  /// Validates |alpha| = 1 (within 1e-12) and finds R <= 64 with
  /// |alpha^R - 1| <= 1e-9.
  static UnitRoot from(Complex alpha) {
    if (std::abs(std::abs(alpha) - 1.0) > 1e-12) {
      throw InvalidInput("alpha must have unit modulus, got |alpha|=" +
                         std::to_string(std::abs(alpha)));
    }
    Complex power = alpha;
    for (int r = 1; r <= kMaxRotation; ++r) {
      if (std::abs(power - Complex(1.0, 0.0)) <= 1e-9) return {alpha, r};
      power *= alpha;
    }
    throw InvalidInput("alpha is not a root of unity of order <= 64");
  }

  /// exp(2 pi i / K).
  static UnitRoot primitive(int K) {
    detail::require(K >= 1 && K <= kMaxRotation, "root-of-unity order must be in 1..64");
    const double theta = 2.0 * std::numbers::pi / K;
    return {std::polar(1.0, theta), K};
  }

  /// Weight of a traversal with the given pair kind: 1, alpha or conj(alpha).
  Complex weight(PairKind k) const {
    switch (k) {
      case PairKind::Bidirected: return {1.0, 0.0};
      case PairKind::Forward: return alpha;
      case PairKind::Backward: return std::conj(alpha);
      case PairKind::NonAdjacent: break;
    }
    return {0.0, 0.0};
  }

  /// alpha^r with r reduced mod R.
  Complex power(int r) const {
    r = ((r % R) + R) % R;
    Complex p{1.0, 0.0};
    for (int i = 0; i < r; ++i) p *= alpha;
    return p;
  }
};

/// Hermitian adjacency matrix A_alpha = A_bi + alpha A_fwd + conj(alpha) A_bwd.
struct HermitianAdjacency {
  UnitRoot root;
  SparseC A;
  SparseR bi;    // u <-> v
  SparseR fwd;   // u -> v only
  SparseR bwd;   // u <- v only

  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(A); }
};

inline HermitianAdjacency hermitian_adjacency(const DirectedGraph& g, Complex alpha) {
  const UnitRoot root = UnitRoot::from(alpha);
  const Vertex n = g.num_vertices();
  std::vector<Eigen::Triplet<Complex>> ta;
  std::vector<Eigen::Triplet<double>> tb, tf, tk;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v : g.neighbors(u)) {
      const PairKind k = classify_pair(g, u, v);
      ta.emplace_back(u, v, root.weight(k));
      switch (k) {
        case PairKind::Bidirected: tb.emplace_back(u, v, 1.0); break;
        case PairKind::Forward: tf.emplace_back(u, v, 1.0); break;
        case PairKind::Backward: tk.emplace_back(u, v, 1.0); break;
        case PairKind::NonAdjacent: break;
      }
    }
  }
  HermitianAdjacency h;
  h.root = root;
  h.A.resize(n, n);
  h.bi.resize(n, n);
  h.fwd.resize(n, n);
  h.bwd.resize(n, n);
  h.A.setFromTriplets(ta.begin(), ta.end());
  h.bi.setFromTriplets(tb.begin(), tb.end());
  h.fwd.setFromTriplets(tf.begin(), tf.end());
  h.bwd.setFromTriplets(tk.begin(), tk.end());
  return h;
}

/// Degree vector d_u = |N_u| of the underlying undirected graph.
inline Eigen::VectorXd degree_vector(const DirectedGraph& g) {
  Eigen::VectorXd d(g.num_vertices());
  for (Vertex u = 0; u < g.num_vertices(); ++u) d(u) = static_cast<double>(g.neighbors(u).size());
  return d;
}

/// Complex non-backtracking matrix B_alpha = B Lambda over the oriented edge
/// index, with the standard non-backtracking matrix B and its split by the
/// type of the column edge.
struct CnbtMatrix {
  UnitRoot root;
  OrientedEdgeIndex index;
  SparseR B;
  Eigen::VectorXcd lambda;
  std::vector<PairKind> kinds;  // kind of (i_e, t_e) per oriented edge
  SparseC B_alpha;
  SparseR bi, fwd, bwd;

  std::size_t dim() const { return index.size(); }
  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(B_alpha); }
};

inline CnbtMatrix cnbt_matrix(const DirectedGraph& g, Complex alpha) {
  CnbtMatrix c;
  c.root = UnitRoot::from(alpha);
  c.index = index_oriented_edges(g);
  const auto dim = static_cast<Eigen::Index>(c.index.size());

  c.lambda.resize(dim);
  c.kinds.resize(dim);
  for (Eigen::Index e = 0; e < dim; ++e) {
    const Edge& oe = c.index[e];
    c.kinds[e] = classify_pair(g, oe.from, oe.to);
    c.lambda(e) = c.root.weight(c.kinds[e]);
  }

  std::vector<Eigen::Triplet<double>> tB, tb, tf, tk;
  std::vector<Eigen::Triplet<Complex>> ta;
  for (Eigen::Index e = 0; e < dim; ++e) {
    const Edge& oe = c.index[e];
    // (B)_{ef} = 1 iff t_e = i_f and i_e != t_f.
    for (std::size_t f : c.index.outgoing(oe.to)) {
      if (c.index[f].to == oe.from) continue;
      const auto fi = static_cast<Eigen::Index>(f);
      tB.emplace_back(e, fi, 1.0);
      ta.emplace_back(e, fi, c.lambda(fi));
      switch (c.kinds[f]) {
        case PairKind::Bidirected: tb.emplace_back(e, fi, 1.0); break;
        case PairKind::Forward: tf.emplace_back(e, fi, 1.0); break;
        case PairKind::Backward: tk.emplace_back(e, fi, 1.0); break;
        case PairKind::NonAdjacent: break;
      }
    }
  }
  for (auto* m : {&c.B, &c.bi, &c.fwd, &c.bwd}) m->resize(dim, dim);
  c.B_alpha.resize(dim, dim);
  c.B.setFromTriplets(tB.begin(), tB.end());
  c.bi.setFromTriplets(tb.begin(), tb.end());
  c.fwd.setFromTriplets(tf.begin(), tf.end());
  c.bwd.setFromTriplets(tk.begin(), tk.end());
  c.B_alpha.setFromTriplets(ta.begin(), ta.end());
  return c;
}

/// The 2n x 2n block matrix [[A_alpha, -I], [D - I, 0]] that acts on stacked
/// (out, in) node vectors.
struct ReducedMatrix {
  UnitRoot root;
  SparseC K;

  Eigen::Index n() const { return K.rows() / 2; }
  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(K); }
};

inline ReducedMatrix reduced_matrix(const DirectedGraph& g, Complex alpha) {
  const HermitianAdjacency h = hermitian_adjacency(g, alpha);
  const Eigen::Index n = g.num_vertices();
  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(h.A.nonZeros() + 2 * n);
  for (Eigen::Index col = 0; col < h.A.outerSize(); ++col) {
    for (SparseC::InnerIterator it(h.A, col); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  }
  for (Eigen::Index u = 0; u < n; ++u) {
    t.emplace_back(u, n + u, Complex(-1.0, 0.0));
    const double dm1 = static_cast<double>(g.neighbors(static_cast<Vertex>(u)).size()) - 1.0;
    if (dm1 != 0.0) t.emplace_back(n + u, u, Complex(dm1, 0.0));
  }
  ReducedMatrix r;
  r.root = h.root;
  r.K.resize(2 * n, 2 * n);
  r.K.setFromTriplets(t.begin(), t.end());
  return r;
}

}  // namespace cnbt
