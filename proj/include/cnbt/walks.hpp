#pragma once

// Brute-force enumeration of non-backtracking mixed walks. Everything here is
// deliberately independent of the matrix builders: counts come from explicit
// depth-first search over vertex sequences, so they can serve as oracles for
// the algebraic identities satisfied by A_alpha and B_alpha.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cnbt/error.hpp"
#include "cnbt/graph.hpp"
#include "cnbt/matrices.hpp"

namespace cnbt {

/// Vertex sequence whose consecutive entries are adjacent in the underlying
/// undirected graph. Length is the number of steps (size() - 1).
using MixedWalk = std::vector<Vertex>;

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

inline int mod_rotation(int r, int R) { return ((r % R) + R) % R; }

inline void check_mixed_walk(const DirectedGraph& g, const MixedWalk& w) {
  detail::require(!w.empty(), "mixed walk must contain at least one vertex");
  for (Vertex v : w) detail::require(g.in_range(v), "mixed walk vertex out of range");
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i] == w[i + 1] || !g.adjacent(w[i], w[i + 1])) {
      throw InvalidInput("mixed walk step " + std::to_string(i) + " (" + std::to_string(w[i]) +
                         "," + std::to_string(w[i + 1]) + ") is not an edge of the underlying graph");
    }
  }
}

/// Sum of step rotations (+1 forward, -1 backward, 0 bidirected) mod R.
inline int rotation(const DirectedGraph& g, const MixedWalk& w, int R) {
  detail::require(R >= 1, "rotation modulus must be positive");
  check_mixed_walk(g, w);
  int r = 0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) r += step_rotation(classify_pair(g, w[i], w[i + 1]));
  return mod_rotation(r, R);
}

inline bool is_nbt(const MixedWalk& w) {
  for (std::size_t i = 1; i + 1 < w.size(); ++i) {
    if (w[i - 1] == w[i + 1]) return false;
  }
  return true;
}

inline bool is_cycle(const MixedWalk& c) { return c.size() >= 2 && c.front() == c.back(); }

/// C^j: the cycle traversed j times.
inline MixedWalk repeat_cycle(const MixedWalk& c, int j) {
  detail::require(is_cycle(c), "repeat_cycle: not a cycle");
  detail::require(j >= 1, "repeat_cycle: repetition count must be positive");
  MixedWalk out = c;
  for (int t = 1; t < j; ++t) out.insert(out.end(), c.begin() + 1, c.end());
  return out;
}

/// True when C is NBT but C^2 is not.
inline bool has_tail(const MixedWalk& c) {
  detail::require(is_cycle(c), "has_tail: walk is not a cycle");
  return is_nbt(c) && !is_nbt(repeat_cycle(c, 2));
}

/// True unless C = D^j for some shorter cycle D and j >= 2.
inline bool is_primitive(const MixedWalk& c) {
  detail::require(is_cycle(c), "is_primitive: walk is not a cycle");
  const std::size_t len = c.size() - 1;
  for (std::size_t d = 1; d < len; ++d) {
    if (len % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = 0; i + d <= len && periodic; ++i) periodic = c[i] == c[i + d];
    if (periodic) return false;
  }
  return true;
}

/// Walk counts by (length k, rotation r):
///   P[k][r](u, v)  NBT mixed walks u -> v,
///   Q[k][r](e, f)  NBT mixed walks ending with f to which e can be prepended,
///   ncyc[k][r]     NBT cycles without a tail.
struct WalkCountTables {
  int R = 1;
  int kmax = 0;
  OrientedEdgeIndex index;
  std::vector<std::vector<IntMatrix>> P;
  std::vector<std::vector<IntMatrix>> Q;
  std::vector<std::vector<std::int64_t>> ncyc;
};

inline constexpr double kWalkEnumerationBound = 1e8;

inline WalkCountTables count_walk_tables(const DirectedGraph& g, int kmax, int R) {
  detail::require(kmax >= 0, "kmax must be non-negative");
  detail::require(R >= 1, "rotation modulus must be positive");
  const Vertex n = g.num_vertices();
  const double bound = std::pow(static_cast<double>(n), kmax + 1);
  if (bound > kWalkEnumerationBound) {
    throw InvalidInput("walk enumeration bound exceeded: n^(kmax+1) = " + std::to_string(bound) +
                       " > 1e8 (n=" + std::to_string(n) + ", kmax=" + std::to_string(kmax) + ")");
  }

  WalkCountTables t;
  t.R = R;
  t.kmax = kmax;
  t.index = index_oriented_edges(g);
  const auto dim = static_cast<Eigen::Index>(t.index.size());
  t.P.assign(kmax + 1, std::vector<IntMatrix>(R, IntMatrix::Zero(n, n)));
  t.Q.assign(kmax + 1, std::vector<IntMatrix>(R, IntMatrix::Zero(dim, dim)));
  t.ncyc.assign(kmax + 1, std::vector<std::int64_t>(R, 0));
  t.Q[0][0] = IntMatrix::Identity(dim, dim);

  MixedWalk walk;
  walk.reserve(kmax + 1);

  auto visit = [&](auto&& self, int rot) -> void {
    const int k = static_cast<int>(walk.size()) - 1;
    const Vertex start = walk.front();
    const Vertex cur = walk.back();
    t.P[k][rot](start, cur) += 1;
    if (k >= 1) {
      const auto f = static_cast<Eigen::Index>(t.index.index_of(walk[k - 1], cur));
      for (std::size_t e : t.index.incoming(start)) {
        if (t.index[e].from != walk[1]) t.Q[k][rot](static_cast<Eigen::Index>(e), f) += 1;
      }
      if (cur == start && !has_tail(walk)) t.ncyc[k][rot] += 1;
    }
    if (k == kmax) return;
    for (Vertex next : g.neighbors(cur)) {
      if (k >= 1 && next == walk[k - 1]) continue;
      walk.push_back(next);
      self(self, mod_rotation(rot + step_rotation(classify_pair(g, cur, next)), R));
      walk.pop_back();
    }
  };

  for (Vertex s = 0; s < n; ++s) {
    walk.assign(1, s);
    visit(visit, 0);
  }
  return t;
}

/// r_k from the three-term recurrence r_1 = A, r_2 = A^2 - D,
/// r_k = r_{k-1} A - r_{k-2} (D - I). Entry k of the result is r_k; entry 0
/// holds the identity.
inline std::vector<Eigen::MatrixXcd> r_k_via_recurrence(const Eigen::MatrixXcd& A,
                                                       const Eigen::VectorXd& degrees, int kmax) {
  detail::require(kmax >= 1, "kmax must be at least 1");
  detail::require(A.rows() == A.cols() && A.rows() == degrees.size(), "dimension mismatch");
  const Eigen::Index n = A.rows();
  const Eigen::MatrixXcd D = degrees.cast<Complex>().asDiagonal();
  const Eigen::MatrixXcd DmI = D - Eigen::MatrixXcd::Identity(n, n);
  std::vector<Eigen::MatrixXcd> r(kmax + 1);
  r[0] = Eigen::MatrixXcd::Identity(n, n);
  r[1] = A;
  if (kmax >= 2) r[2] = A * A - D;
  for (int k = 3; k <= kmax; ++k) r[k] = r[k - 1] * A - r[k - 2] * DmI;
  return r;
}

/// sum_r alpha^r P_(k,r) as a complex matrix.
inline Eigen::MatrixXcd weighted_walk_sum(const std::vector<IntMatrix>& by_rotation, const UnitRoot& root) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(by_rotation.front().rows(), by_rotation.front().cols());
  for (int r = 0; r < static_cast<int>(by_rotation.size()); ++r) {
    out += root.power(r) * by_rotation[r].cast<double>().cast<Complex>();
  }
  return out;
}

/// Coefficients c_k = sum_r alpha^r n_(k,r) of the logarithmic-derivative
/// series of the weighted zeta function; entry 0 is zero.
inline std::vector<Complex> zeta_log_series(const WalkCountTables& tables, const UnitRoot& root, int kmax) {
  detail::require(kmax <= tables.kmax, "tables do not cover requested kmax");
  detail::require(root.R == tables.R, "rotation modulus of alpha does not match tables");
  std::vector<Complex> coeffs(kmax + 1, Complex{});
  for (int k = 1; k <= kmax; ++k) {
    for (int r = 0; r < tables.R; ++r) coeffs[k] += root.power(r) * static_cast<double>(tables.ncyc[k][r]);
  }
  return coeffs;
}

}  // namespace cnbt
