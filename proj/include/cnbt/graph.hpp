#pragma once

#include <algorithm>
#include <compare>
#include <iterator>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cnbt/error.hpp"

namespace cnbt {

using Vertex = std::int32_t;

/// Ordered vertex pair (tail -> head).
struct Edge {
  Vertex from = 0;
  Vertex to = 0;

  constexpr Edge reversed() const { return {to, from}; }
  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Relation between an ordered vertex pair (u, v) in a digraph.
enum class PairKind : std::uint8_t {
  Bidirected,   // u -> v and v -> u
  Forward,      // u -> v only
  Backward,     // v -> u only
  NonAdjacent,
};

inline const char* to_string(PairKind k) {
  switch (k) {
    case PairKind::Bidirected: return "bidirected";
    case PairKind::Forward: return "forward";
    case PairKind::Backward: return "backward";
    case PairKind::NonAdjacent: return "non-adjacent";
  }
  return "?";
}

/// Directed simple graph without self-loops on vertices 0..n-1.
///
/// Immutable after construction; edges are kept sorted by (from, to), and
/// per-vertex adjacency lists are sorted ascending.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  /// Validates and builds. Rejects self-loops, out-of-range endpoints and
  /// duplicate directed edges.
  DirectedGraph(Vertex n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    detail::require(n >= 0, "vertex count must be non-negative");
    for (const Edge& e : edges_) {
      if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) {
        throw InvalidInput("edge (" + std::to_string(e.from) + "," + std::to_string(e.to) +
                           ") has endpoint out of range for n=" + std::to_string(n));
      }
      if (e.from == e.to) {
        throw InvalidInput("self-loop at vertex " + std::to_string(e.from));
      }
    }
    std::sort(edges_.begin(), edges_.end());
    auto dup = std::adjacent_find(edges_.begin(), edges_.end());
    if (dup != edges_.end()) {
      throw InvalidInput("duplicate directed edge (" + std::to_string(dup->from) + "," +
                         std::to_string(dup->to) + ")");
    }

    out_.assign(n_, {});
    in_.assign(n_, {});
    for (const Edge& e : edges_) {
      out_[e.from].push_back(e.to);
      in_[e.to].push_back(e.from);
    }
    // edges_ is sorted by (from, to), so out_ lists are sorted already.
    for (auto& l : in_) std::sort(l.begin(), l.end());

    nbrs_.assign(n_, {});
    for (Vertex u = 0; u < n_; ++u) {
      auto& nb = nbrs_[u];
      std::set_union(out_[u].begin(), out_[u].end(), in_[u].begin(), in_[u].end(),
                     std::back_inserter(nb));
    }
  }

  Vertex num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }

  std::span<const Vertex> out_neighbors(Vertex u) const { return out_[u]; }
  std::span<const Vertex> in_neighbors(Vertex u) const { return in_[u]; }
  /// Neighbours in the underlying undirected graph.
  std::span<const Vertex> neighbors(Vertex u) const { return nbrs_[u]; }

  bool in_range(Vertex u) const { return u >= 0 && u < n_; }

  bool has_edge(Vertex u, Vertex v) const {
    if (!in_range(u) || !in_range(v)) return false;
    const auto& l = out_[u];
    return std::binary_search(l.begin(), l.end(), v);
  }

  bool adjacent(Vertex u, Vertex v) const { return has_edge(u, v) || has_edge(v, u); }

  /// Number of unoriented edges of the underlying undirected graph.
  std::size_t num_unoriented_edges() const {
    std::size_t twice = 0;
    for (const auto& nb : nbrs_) twice += nb.size();
    return twice / 2;
  }

  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  Vertex n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> out_;
  std::vector<std::vector<Vertex>> in_;
  std::vector<std::vector<Vertex>> nbrs_;
};

inline DirectedGraph build_graph(Vertex n, std::vector<Edge> edge_list) {
  return DirectedGraph(n, std::move(edge_list));
}

inline PairKind classify_pair(const DirectedGraph& g, Vertex u, Vertex v) {
  detail::require(g.in_range(u) && g.in_range(v), "classify_pair: vertex out of range");
  detail::require(u != v, "classify_pair: u and v must differ");
  const bool uv = g.has_edge(u, v);
  const bool vu = g.has_edge(v, u);
  if (uv && vu) return PairKind::Bidirected;
  if (uv) return PairKind::Forward;
  if (vu) return PairKind::Backward;
  return PairKind::NonAdjacent;
}

/// Rotation contribution of traversing u -> v: +1 forward, -1 backward,
/// 0 bidirected.
inline int step_rotation(PairKind k) {
  switch (k) {
    case PairKind::Forward: return 1;
    case PairKind::Backward: return -1;
    case PairKind::Bidirected: return 0;
    case PairKind::NonAdjacent: break;
  }
  throw InvalidInput("step_rotation: vertices are not adjacent");
}

/// Indexed set of oriented edges: every unoriented edge appears in both
/// orientations, with edge m+i the reverse of edge i.
///
/// The first m entries are the pairs (min, max) in ascending order.
class OrientedEdgeIndex {
 public:
  OrientedEdgeIndex() = default;

  explicit OrientedEdgeIndex(const DirectedGraph& g) : n_(g.num_vertices()) {
    std::vector<Edge> firsts;
    for (Vertex u = 0; u < n_; ++u) {
      for (Vertex v : g.neighbors(u)) {
        if (u < v) firsts.push_back({u, v});
      }
    }
    m_ = firsts.size();
    edges_.reserve(2 * m_);
    edges_ = firsts;
    for (const Edge& e : firsts) edges_.push_back(e.reversed());

    outgoing_.assign(n_, {});
    incoming_.assign(n_, {});
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      outgoing_[edges_[i].from].push_back(i);
      incoming_[edges_[i].to].push_back(i);
    }
    for (Vertex u = 0; u < n_; ++u) {
      std::sort(outgoing_[u].begin(), outgoing_[u].end(),
                [&](std::size_t a, std::size_t b) { return edges_[a].to < edges_[b].to; });
    }
  }

  std::size_t m() const { return m_; }
  std::size_t size() const { return edges_.size(); }
  const Edge& operator[](std::size_t i) const { return edges_[i]; }
  std::span<const Edge> edges() const { return edges_; }

  std::size_t reverse_of(std::size_t i) const { return i < m_ ? i + m_ : i - m_; }

  /// Oriented edges with initial vertex u, sorted by terminal vertex.
  std::span<const std::size_t> outgoing(Vertex u) const { return outgoing_[u]; }
  /// Oriented edges with terminal vertex u.
  std::span<const std::size_t> incoming(Vertex u) const { return incoming_[u]; }

  /// Index of the oriented edge u -> v; throws if uv is not an edge of the
  /// underlying undirected graph.
  std::size_t index_of(Vertex u, Vertex v) const {
    detail::require(u >= 0 && u < n_, "index_of: vertex out of range");
    const auto& out = outgoing_[u];
    auto it = std::lower_bound(out.begin(), out.end(), v,
                               [&](std::size_t e, Vertex t) { return edges_[e].to < t; });
    if (it == out.end() || edges_[*it].to != v) {
      throw InvalidInput("index_of: (" + std::to_string(u) + "," + std::to_string(v) +
                         ") is not an oriented edge");
    }
    return *it;
  }

 private:
  Vertex n_ = 0;
  std::size_t m_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> outgoing_;
  std::vector<std::vector<std::size_t>> incoming_;
};

inline OrientedEdgeIndex index_oriented_edges(const DirectedGraph& g) {
  return OrientedEdgeIndex(g);
}

/// Per-vertex neighbourhoods split by pair kind, and the matching degrees.
struct NeighborhoodProfile {
  std::vector<std::vector<Vertex>> in;    // v with v -> u only
  std::vector<std::vector<Vertex>> out;   // v with u -> v only
  std::vector<std::vector<Vertex>> bi;    // v with u <-> v
  std::vector<std::vector<Vertex>> all;

  std::vector<int> in_degree, out_degree, bi_degree, degree;

  explicit NeighborhoodProfile(const DirectedGraph& g) {
    const Vertex n = g.num_vertices();
    in.assign(n, {});
    out.assign(n, {});
    bi.assign(n, {});
    all.assign(n, {});
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v : g.neighbors(u)) {
        all[u].push_back(v);
        switch (classify_pair(g, u, v)) {
          case PairKind::Bidirected: bi[u].push_back(v); break;
          case PairKind::Forward: out[u].push_back(v); break;
          case PairKind::Backward: in[u].push_back(v); break;
          case PairKind::NonAdjacent: break;
        }
      }
    }
    auto sizes = [](const auto& lists) {
      std::vector<int> d;
      d.reserve(lists.size());
      for (const auto& l : lists) d.push_back(static_cast<int>(l.size()));
      return d;
    };
    in_degree = sizes(in);
    out_degree = sizes(out);
    bi_degree = sizes(bi);
    degree = sizes(all);
  }
};

}  // namespace cnbt
