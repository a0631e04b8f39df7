#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cnbt/graph.hpp"
#include "cnbt/matrices.hpp"

namespace cnbt::testing {

/// Each unordered pair is joined with probability p, then made forward,
/// backward or bidirected with equal probability.
inline DirectedGraph random_digraph(Vertex n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> kind(0, 2);
  std::vector<Edge> edges;
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) {
      if (u(rng) >= p) continue;
      switch (kind(rng)) {
        case 0: edges.push_back({a, b}); break;
        case 1: edges.push_back({b, a}); break;
        default:
          edges.push_back({a, b});
          edges.push_back({b, a});
      }
    }
  }
  return DirectedGraph(n, std::move(edges));
}

/// Four-vertex graph with 1 <-> 2, 1 -> 3, 2 -> 3, 3 -> 4, 4 -> 2 (1-based
/// labels; vertices here are 0-based).
inline DirectedGraph worked_example_graph() {
  return DirectedGraph(4, {{0, 1}, {1, 0}, {0, 2}, {1, 2}, {2, 3}, {3, 1}});
}

inline Eigen::VectorXcd random_complex_vector(Eigen::Index size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Eigen::VectorXcd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = Complex(z(rng), z(rng));
  return v;
}

inline Eigen::MatrixXcd random_complex_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Eigen::VectorXcd v = random_complex_vector(rows * cols, seed);
  return Eigen::Map<Eigen::MatrixXcd>(v.data(), rows, cols);
}

}  // namespace cnbt::testing
