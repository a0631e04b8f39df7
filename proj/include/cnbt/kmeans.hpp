#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cnbt/error.hpp"

namespace cnbt {

struct KMeansResult {
  std::vector<int> labels;
  Eigen::MatrixXd centers;  // K x d
  double inertia = 0.0;
  int iterations = 0;       // Lloyd iterations of the winning restart
  int empty_reseeds = 0;
};

namespace detail {

inline double squared_distance(const Eigen::MatrixXd& X, Eigen::Index i, const Eigen::MatrixXd& C, Eigen::Index c) {
  return (X.row(i) - C.row(c)).squaredNorm();
}

inline Eigen::MatrixXd kmeanspp_seed(const Eigen::MatrixXd& X, int K, std::mt19937_64& rng) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd C(K, X.cols());
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  C.row(0) = X.row(pick(rng));
  Eigen::VectorXd d2(n);
  for (Eigen::Index i = 0; i < n; ++i) d2(i) = squared_distance(X, i, C, 0);
  for (int c = 1; c < K; ++c) {
    const double total = d2.sum();
    Eigen::Index chosen = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng);
      chosen = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        target -= d2(i);
        if (target < 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    C.row(c) = X.row(chosen);
    for (Eigen::Index i = 0; i < n; ++i) d2(i) = std::min(d2(i), squared_distance(X, i, C, c));
  }
  return C;
}

inline KMeansResult lloyd(const Eigen::MatrixXd& X, Eigen::MatrixXd C, int max_iter) {
  const Eigen::Index n = X.rows();
  const auto K = static_cast<int>(C.rows());
  KMeansResult r;
  r.labels.assign(n, -1);
  for (int it = 1; it <= max_iter; ++it) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (int c = 0; c < K; ++c) {
        const double d = squared_distance(X, i, C, c);
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      if (r.labels[i] != best) {
        r.labels[i] = best;
        changed = true;
      }
    }
    r.iterations = it;
    if (!changed && it > 1) break;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(K, X.cols());
    std::vector<Eigen::Index> counts(K, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(r.labels[i]) += X.row(i);
      ++counts[r.labels[i]];
    }
    for (int c = 0; c < K; ++c) {
      if (counts[c] > 0) {
        C.row(c) = sums.row(c) / static_cast<double>(counts[c]);
        continue;
      }
      // Empty cluster: move its center onto the point farthest from its own center.
      Eigen::Index far = 0;
      double fd = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d = squared_distance(X, i, C, r.labels[i]);
        if (d > fd) {
          fd = d;
          far = i;
        }
      }
      C.row(c) = X.row(far);
      ++r.empty_reseeds;
    }
  }
  r.inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) r.inertia += squared_distance(X, i, C, r.labels[i]);
  r.centers = std::move(C);
  return r;
}

}  // namespace detail

/// Lloyd's k-means with k-means++ seeding; best of `restarts` runs by inertia.
inline KMeansResult kmeans(const Eigen::MatrixXd& points, int K, std::uint64_t seed, int restarts = 10,
                           int max_iter = 300) {
  detail::require(points.cols() >= 1, "kmeans: points need at least one dimension");
  detail::require(K >= 1 && K <= points.rows(), "kmeans: K must be in 1..n");
  detail::require(restarts >= 1, "kmeans: restarts must be positive");
  detail::require(points.allFinite(), "kmeans: non-finite coordinates");
  std::mt19937_64 rng(seed);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    KMeansResult cur = detail::lloyd(points, detail::kmeanspp_seed(points, K, rng), max_iter);
    if (cur.inertia < best.inertia) best = std::move(cur);
  }
  return best;
}

}  // namespace cnbt
