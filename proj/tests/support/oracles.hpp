#pragma once

// Reference computations written without the library's solvers, for use as
// test oracles.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace cnbt::testing {

using C = std::complex<double>;

/// Characteristic polynomial coefficients c_0..c_n (monic, c_0 = 1) of
/// det(xI - M) = sum_k c_k x^{n-k}, by Faddeev-LeVerrier.
inline std::vector<C> charpoly(const Eigen::MatrixXcd& M) {
  const Eigen::Index n = M.rows();
  std::vector<C> c(n + 1);
  c[0] = 1.0;
  Eigen::MatrixXcd Mk = Eigen::MatrixXcd::Zero(n, n);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    Mk = M * Mk + c[k - 1] * I;
    c[k] = -(M * Mk).trace() / static_cast<double>(k);
  }
  return c;
}

/// All roots of sum_k c_k x^{n-k} by Durand-Kerner with Newton polishing.
inline std::vector<C> polynomial_roots(const std::vector<C>& c) {
  const std::size_t n = c.size() - 1;
  if (n == 0) return {};
  auto eval = [&](C x) {
    C acc = 0.0;
    for (const C& a : c) acc = acc * x + a;
    return acc;
  };
  auto deriv = [&](C x) {
    C acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc = acc * x + c[k] * static_cast<double>(n - k);
    return acc;
  };
  double radius = 0.0;
  for (std::size_t k = 1; k <= n; ++k) radius = std::max(radius, std::pow(std::abs(c[k] / c[0]), 1.0 / k));
  radius = 2.0 * radius + 1.0;
  std::vector<C> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = std::polar(radius, 2.0 * std::numbers::pi * (i + 0.25) / n);
  for (int it = 0; it < 5000; ++it) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      C denom = c[0];
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) denom *= z[i] - z[j];
      }
      const C step = eval(z[i]) / denom;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15 * radius) break;
  }
  for (C& x : z) {
    for (int it = 0; it < 3; ++it) {
      const C d = deriv(x);
      if (std::abs(d) > 0.0) x -= eval(x) / d;
    }
  }
  return z;
}

/// Largest distance under a greedy nearest pairing of two equal-size
/// multisets; infinity when sizes differ.
inline double multiset_distance(std::vector<C> a, std::vector<C> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const C& x : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](const C& p, const C& q) { return std::abs(p - x) < std::abs(q - x); });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

/// ARI by explicit pair counting over all C(n,2) pairs.
inline double brute_force_ari(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size();
  double both = 0, only_a = 0, only_b = 0, neither = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool sa = a[i] == a[j], sb = b[i] == b[j];
      if (sa && sb) ++both;
      else if (sa) ++only_a;
      else if (sb) ++only_b;
      else ++neither;
    }
  }
  const double pairs = both + only_a + only_b + neither;
  const double same_a = both + only_a, same_b = both + only_b;
  const double expected = same_a * same_b / pairs;
  const double max_index = 0.5 * (same_a + same_b);
  if (max_index == expected) return 1.0;
  return (both - expected) / (max_index - expected);
}

/// Taylor coefficients a_1..a_kmax of f(u) = -log det(I - u M) around u = 0,
/// from a discrete Fourier transform of f on the circle |u| = radius, which
/// must be below 1 / spectral radius.
inline std::vector<C> log_det_taylor(const Eigen::MatrixXcd& M, int kmax, double radius, int samples = 256) {
  const Eigen::Index n = M.rows();
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  std::vector<C> f(samples);
  for (int s = 0; s < samples; ++s) {
    const C u = std::polar(radius, 2.0 * std::numbers::pi * s / samples);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(I - u * M, false);
    C acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) acc += std::log(es.eigenvalues()(i));
    f[s] = -acc;
  }
  // |u mu| < 1 keeps each principal log continuous along the circle.
  std::vector<C> a(kmax + 1, 0.0);
  for (int k = 1; k <= kmax; ++k) {
    C acc = 0.0;
    for (int s = 0; s < samples; ++s) acc += f[s] * std::polar(1.0, -2.0 * std::numbers::pi * k * s / samples);
    a[k] = acc / static_cast<double>(samples) / std::pow(radius, k);
  }
  return a;
}

/// Largest principal angle (radians) between the column spans of X and Y.
inline double max_principal_angle(const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& Y) {
  const Eigen::MatrixXcd qx = Eigen::HouseholderQR<Eigen::MatrixXcd>(X).householderQ() *
                              Eigen::MatrixXcd::Identity(X.rows(), X.cols());
  const Eigen::MatrixXcd qy = Eigen::HouseholderQR<Eigen::MatrixXcd>(Y).householderQ() *
                              Eigen::MatrixXcd::Identity(Y.rows(), Y.cols());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(qx.adjoint() * qy);
  const double smallest = svd.singularValues().minCoeff();
  return std::acos(std::clamp(smallest, -1.0, 1.0));
}

/// Spearman rank correlation (average ranks for ties).
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      for (std::size_t t = i; t <= j; ++t) r[idx[t]] = 0.5 * static_cast<double>(i + j) + 1.0;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace cnbt::testing
