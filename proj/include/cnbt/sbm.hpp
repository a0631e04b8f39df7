#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cnbt/error.hpp"
#include "cnbt/graph.hpp"

namespace cnbt {

/// Stateless counter-based generator: every draw is a hash of
/// (seed, stream, counter), so samples do not depend on evaluation order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const {
    return mix(mix(mix(seed_) ^ stream) ^ counter);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint64_t stream, std::uint64_t counter) const {
    return static_cast<double>(bits(stream, counter) >> 11) * 0x1.0p-53;
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

namespace stream {
inline constexpr std::uint64_t kPair = 1;
inline constexpr std::uint64_t kOrientation = 2;
inline constexpr std::uint64_t kTheta = 3;
}  // namespace stream

/// Relation of cluster b to cluster a under the circular pattern.
enum class CircularRole : std::uint8_t { Correct, Reverse, Other };

inline CircularRole circular_role(int a, int b, int K) {
  if ((a + 1) % K == b) return CircularRole::Correct;
  if ((b + 1) % K == a) return CircularRole::Reverse;
  return CircularRole::Other;
}

/// Contiguous equal-size blocks: vertex u belongs to cluster u / (n / K).
inline std::vector<int> block_labels(Vertex n, int K) {
  detail::require(K >= 1, "cluster count must be positive");
  detail::require(n % K == 0, "n=" + std::to_string(n) + " is not divisible by K=" + std::to_string(K));
  std::vector<int> labels(n);
  const Vertex size = n / K;
  for (Vertex u = 0; u < n; ++u) labels[u] = u / size;
  return labels;
}

/// F_ab = 1 - eta if a+1 = b (mod K), eta if b+1 = a, 0.5 otherwise.
inline Eigen::MatrixXd circular_orientation(int K, double eta) {
  detail::require(K >= 3, "circular orientation matrix needs K >= 3 (K=2 makes both off-diagonal entries 'correct')");
  detail::require(eta >= 0.0 && eta <= 0.5, "eta must lie in [0, 0.5]");
  Eigen::MatrixXd F(K, K);
  for (int a = 0; a < K; ++a) {
    for (int b = 0; b < K; ++b) {
      switch (circular_role(a, b, K)) {
        case CircularRole::Correct: F(a, b) = 1.0 - eta; break;
        case CircularRole::Reverse: F(a, b) = eta; break;
        case CircularRole::Other: F(a, b) = 0.5; break;
      }
    }
  }
  return F;
}

inline void validate_orientation(const Eigen::MatrixXd& F) {
  detail::require(F.rows() == F.cols(), "orientation matrix must be square");
  for (Eigen::Index a = 0; a < F.rows(); ++a) {
    for (Eigen::Index b = 0; b < F.cols(); ++b) {
      detail::require(F(a, b) >= 0.0 && F(a, b) <= 1.0, "orientation matrix entries must lie in [0, 1]");
      if (std::abs(F(a, b) + F(b, a) - 1.0) > 1e-12) {
        throw InvalidInput("orientation matrix violates F_ab + F_ba = 1 at (" + std::to_string(a) + "," +
                           std::to_string(b) + ")");
      }
    }
  }
}

struct DenseDsbmParams {
  int K = 0;
  Vertex n = 0;
  double p = 0.0;
  double eta = 0.0;
  std::optional<Eigen::MatrixXd> F;  // defaults to circular_orientation(K, eta)

  Eigen::MatrixXd orientation() const { return F ? *F : circular_orientation(K, eta); }
};

struct SbmSample {
  DirectedGraph graph;
  std::vector<int> labels;
  std::vector<double> theta;     // all ones unless degree-corrected
  std::int64_t clipped = 0;      // pairs whose probability exceeded 1
  double clip_fraction = 0.0;
  std::vector<std::string> warnings;
};

/// Each unordered pair joins with probability p and is then oriented u -> v
/// with probability F_{c(u), c(v)}.
inline SbmSample dense_dsbm_sample(const DenseDsbmParams& params, std::uint64_t seed) {
  detail::require(params.K >= 2, "K must be at least 2");
  detail::require(params.p >= 0.0 && params.p <= 1.0, "p must lie in [0, 1]");
  const Eigen::MatrixXd F = params.orientation();
  detail::require(F.rows() == params.K, "orientation matrix size does not match K");
  validate_orientation(F);
  SbmSample s;
  s.labels = block_labels(params.n, params.K);
  s.theta.assign(params.n, 1.0);
  const CounterRng rng(seed);
  const auto n = static_cast<std::uint64_t>(params.n);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < params.n; ++u) {
    for (Vertex v = u + 1; v < params.n; ++v) {
      const std::uint64_t pair = static_cast<std::uint64_t>(u) * n + static_cast<std::uint64_t>(v);
      if (rng.uniform(stream::kPair, pair) >= params.p) continue;
      const bool forward = rng.uniform(stream::kOrientation, pair) < F(s.labels[u], s.labels[v]);
      edges.push_back(forward ? Edge{u, v} : Edge{v, u});
    }
  }
  s.graph = DirectedGraph(params.n, std::move(edges));
  return s;
}

struct Gammas {
  double correct = 0.0;
  double reverse = 0.0;
  double intra = 0.0;
};

inline Gammas gamma_from(double c, double epsilon, double eta) {
  detail::require(c > 0.0 && epsilon > 0.0 && eta > 0.0, "c, epsilon and eta must be positive");
  const double denom = 1.0 + eta * (1.0 + epsilon);
  return {2.0 * c * epsilon * eta / denom, 2.0 * c * eta / denom, 2.0 * c / denom};
}

enum class SparseModel : std::uint8_t { Dsbm, Dcsbm };

struct SparseSbmParams {
  int K = 0;
  Vertex n = 0;
  double c = 0.0;
  double epsilon = 1.0;
  double eta = 1.0;
  double pareto_exponent = 2.5;  // shape of the degree-correction law
  double pareto_scale = 1.0;
};

/// Pareto(scale, shape) by inversion.
inline double pareto_draw(double u, double shape, double scale) { return scale * std::pow(1.0 - u, -1.0 / shape); }

inline std::vector<double> pareto_sample(std::size_t count, double shape, double scale, std::uint64_t seed) {
  detail::require(shape > 0.0 && scale > 0.0, "Pareto shape and scale must be positive");
  const CounterRng rng(seed);
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = pareto_draw(rng.uniform(stream::kTheta, i), shape, scale);
  return out;
}

/// Gamma_{ab}: correct for a+1 = b (mod K), reverse for b+1 = a, intra
/// otherwise (including a = b).
inline Eigen::MatrixXd gamma_matrix(int K, const Gammas& g) {
  Eigen::MatrixXd G(K, K);
  for (int a = 0; a < K; ++a) {
    for (int b = 0; b < K; ++b) {
      switch (circular_role(a, b, K)) {
        case CircularRole::Correct: G(a, b) = g.correct; break;
        case CircularRole::Reverse: G(a, b) = g.reverse; break;
        case CircularRole::Other: G(a, b) = g.intra; break;
      }
    }
  }
  return G;
}

inline constexpr double kClipWarningFraction = 0.01;

/// Every ordered pair u != v gets an edge independently with probability
/// Gamma_{ab}/n (dsbm) or theta_u theta_v Gamma_{ab}/n (dcsbm), clipped at 1.
inline SbmSample sparse_sbm_sample(const SparseSbmParams& params, SparseModel model, std::uint64_t seed) {
  detail::require(params.K >= 2, "K must be at least 2");
  detail::require(params.n >= 1, "n must be positive");
  const Eigen::MatrixXd G = gamma_matrix(params.K, gamma_from(params.c, params.epsilon, params.eta));
  SbmSample s;
  s.labels = block_labels(params.n, params.K);
  s.theta = model == SparseModel::Dcsbm
                ? pareto_sample(static_cast<std::size_t>(params.n), params.pareto_exponent, params.pareto_scale, seed)
                : std::vector<double>(params.n, 1.0);
  const CounterRng rng(seed);
  const auto n = static_cast<std::uint64_t>(params.n);
  const double inv_n = 1.0 / static_cast<double>(params.n);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < params.n; ++u) {
    for (Vertex v = 0; v < params.n; ++v) {
      if (u == v) continue;
      double prob = s.theta[u] * s.theta[v] * G(s.labels[u], s.labels[v]) * inv_n;
      if (prob > 1.0) {
        prob = 1.0;
        ++s.clipped;
      }
      const std::uint64_t pair = static_cast<std::uint64_t>(u) * n + static_cast<std::uint64_t>(v);
      if (rng.uniform(stream::kPair, pair) < prob) edges.push_back({u, v});
    }
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n > 0 ? n - 1 : 0);
  s.clip_fraction = pairs > 0 ? static_cast<double>(s.clipped) / pairs : 0.0;
  if (s.clip_fraction > kClipWarningFraction) {
    s.warnings.push_back("clipped " + std::to_string(s.clipped) + " pair probabilities at 1 (fraction " +
                         std::to_string(s.clip_fraction) + ")");
  }
  s.graph = DirectedGraph(params.n, std::move(edges));
  return s;
}

}  // namespace cnbt
