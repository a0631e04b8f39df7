#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cnbt/eigensolver.hpp"
#include "cnbt/error.hpp"
#include "cnbt/graph.hpp"
#include "cnbt/kmeans.hpp"
#include "cnbt/matrices.hpp"
#include "cnbt/spectral.hpp"

namespace cnbt {

enum class Method : std::uint8_t { CnbtOut, CnbtIn, Herm, SimpleHerm, DdSym, DiSim };

inline constexpr Method kAllMethods[] = {Method::CnbtOut, Method::CnbtIn, Method::Herm,
                                         Method::SimpleHerm, Method::DdSym, Method::DiSim};

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::CnbtOut: return "cnbt-out";
    case Method::CnbtIn: return "cnbt-in";
    case Method::Herm: return "herm";
    case Method::SimpleHerm: return "simpleherm";
    case Method::DdSym: return "ddsym";
    case Method::DiSim: return "disim";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view s) {
  for (Method m : kAllMethods) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

enum class NodeVariant : std::uint8_t { Out, In };

/// Where the CNBT eigenvectors come from.
enum class EigenPath : std::uint8_t {
  Reduced,  // 2n x 2n block matrix; out/in vectors are its two halves
  Direct,   // 2m x 2m B_alpha; out/in vectors by aggregation over edges
};

struct ClusteringOptions {
  std::uint64_t seed = 0;
  int kmeans_restarts = 10;
  EigenPath path = EigenPath::Reduced;
  std::optional<Complex> alpha_override;  // research hook; default exp(2 pi i / K)
  ArnoldiOptions arnoldi{};
  // Dense Hermitian solves are used for baselines up to this size.
  Eigen::Index dense_hermitian_limit = 1500;
};

struct ClusteringRun {
  Method method = Method::CnbtOut;
  int K = 0;
  std::uint64_t seed = 0;
  std::vector<int> labels;
  std::vector<Complex> eigenvalues;  // eigenvalues whose vectors were used
  double inertia = 0.0;
  int kmeans_iterations = 0;
  int eigen_restarts = 0;
  int zero_rows = 0;                 // vertices with an all-zero feature row
  bool degenerate = false;           // spectrum carried no usable signal
};

/// Embedding handed to k-means: X (complex), its row-normalized version, and
/// the real matrix (Re X~, Im X~).
struct FeatureMatrix {
  Eigen::MatrixXcd X;
  Eigen::MatrixXcd X_tilde;
  Eigen::MatrixXd X_real;
  int zero_rows = 0;
};

inline constexpr double kZeroRowTolerance = 1e-12;

inline FeatureMatrix make_features(Eigen::MatrixXcd X, bool normalize_rows = true) {
  FeatureMatrix f;
  f.X = std::move(X);
  f.X_tilde = f.X;
  for (Eigen::Index i = 0; i < f.X.rows(); ++i) {
    const double norm = f.X.row(i).norm();
    if (norm <= kZeroRowTolerance) {
      f.X_tilde.row(i).setZero();
      ++f.zero_rows;
    } else if (normalize_rows) {
      f.X_tilde.row(i) /= norm;
    }
  }
  f.X_real.resize(f.X.rows(), 2 * f.X.cols());
  f.X_real << f.X_tilde.real(), f.X_tilde.imag();
  return f;
}

namespace detail {

inline void check_cluster_args(const DirectedGraph& g, int K) {
  require(K >= 2, "cluster count K must be at least 2");
  require(K <= g.num_vertices(), "cluster count K exceeds the number of vertices");
}

inline ClusteringRun finish_run(Method method, int K, const FeatureMatrix& f, std::vector<Complex> eigenvalues,
                                int restarts, const ClusteringOptions& opt) {
  ClusteringRun run;
  run.method = method;
  run.K = K;
  run.seed = opt.seed;
  run.zero_rows = f.zero_rows;
  run.eigen_restarts = restarts;
  run.eigenvalues = std::move(eigenvalues);
  run.degenerate = true;
  for (const Complex& l : run.eigenvalues) run.degenerate = run.degenerate && std::abs(l) <= 1e-12;
  const KMeansResult km = kmeans(f.X_real, K, opt.seed, opt.kmeans_restarts);
  run.labels = km.labels;
  run.inertia = km.inertia;
  run.kmeans_iterations = km.iterations;
  return run;
}

/// Rotates v so its largest-modulus entry is real and positive.
inline Eigen::VectorXcd fix_phase(Eigen::VectorXcd v) {
  if (v.size() == 0) return v;
  Eigen::Index at = 0;
  v.cwiseAbs().maxCoeff(&at);
  if (std::abs(v(at)) > 0.0) v *= std::conj(v(at)) / std::abs(v(at));
  return v;
}

/// Top-k eigenpairs of a Hermitian matrix. `which` LargestReal sorts by
/// algebraic value, LargestMagnitude by |lambda|.
inline EigenPairs hermitian_top(const SparseC& M, Eigen::Index k, Which which, const ClusteringOptions& opt) {
  const Eigen::Index n = M.rows();
  if (n <= opt.dense_hermitian_limit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es{Eigen::MatrixXcd(M)};
    if (es.info() != Eigen::Success) throw NumericalError("hermitian eigensolver failed");
    Eigen::VectorXcd vals = es.eigenvalues().cast<Complex>();
    const auto order = ordering(which, vals);
    EigenPairs p;
    p.matrix_norm = n ? es.eigenvalues().cwiseAbs().maxCoeff() : 0.0;
    p.vectors.resize(n, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      p.values.push_back(vals(order[i]));
      p.vectors.col(i) = es.eigenvectors().col(order[i]);
      p.residuals.push_back(0.0);
    }
    return p;
  }
  ArnoldiOptions a = opt.arnoldi;
  a.which = which;
  EigenPairs p = eigendecompose(M, k, a);
  for (Eigen::Index i = 0; i < k; ++i) p.vectors.col(i) = fix_phase(p.vectors.col(i));
  return p;
}

inline SparseR adjacency(const DirectedGraph& g) {
  std::vector<Eigen::Triplet<double>> t;
  for (const Edge& e : g.edges()) t.emplace_back(e.from, e.to, 1.0);
  SparseR A(g.num_vertices(), g.num_vertices());
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

inline Eigen::VectorXd inv_sqrt(const Eigen::VectorXd& d) {
  return d.unaryExpr([](double x) { return x > 0.0 ? 1.0 / std::sqrt(x) : 0.0; });
}

}  // namespace detail

/// Eigenvalues (largest real part first) and node embedding used by CNBT-SC.
struct CnbtEmbedding {
  FeatureMatrix features;
  std::vector<Complex> eigenvalues;
  int restarts = 0;
};

inline CnbtEmbedding cnbt_embedding(const DirectedGraph& g, int K, NodeVariant variant,
                                    const ClusteringOptions& opt = {}) {
  detail::check_cluster_args(g, K);
  detail::require(g.num_edges() > 0, "CNBT-SC needs a graph with at least one edge");
  const Complex alpha = opt.alpha_override.value_or(UnitRoot::primitive(K).alpha);
  const Eigen::Index count = K / 2;
  const Vertex n = g.num_vertices();
  ArnoldiOptions a = opt.arnoldi;
  a.which = Which::LargestReal;

  Eigen::MatrixXcd X(n, count);
  CnbtEmbedding emb;
  if (opt.path == EigenPath::Reduced) {
    const ReducedMatrix r = reduced_matrix(g, alpha);
    const EigenPairs p = eigendecompose(r.K, count, a);
    for (Eigen::Index j = 0; j < count; ++j) {
      X.col(j) = variant == NodeVariant::Out ? p.vectors.col(j).head(n) : p.vectors.col(j).tail(n);
    }
    emb.eigenvalues = p.values;
    emb.restarts = p.restarts;
  } else {
    const CnbtMatrix c = cnbt_matrix(g, alpha);
    const EigenPairs p = eigendecompose(c.B_alpha, count, a);
    for (Eigen::Index j = 0; j < count; ++j) {
      const NodeVectors nv = node_vectors(c, n, p.vectors.col(j));
      X.col(j) = variant == NodeVariant::Out ? nv.out : nv.in;
    }
    emb.eigenvalues = p.values;
    emb.restarts = p.restarts;
  }
  emb.features = make_features(std::move(X));
  return emb;
}

/// CNBT spectral clustering: alpha = exp(2 pi i / K), floor(K/2) eigenvectors
/// of largest real part, node aggregation, row normalization, k-means on
/// (Re, Im).
inline ClusteringRun cnbt_sc(const DirectedGraph& g, int K, NodeVariant variant, const ClusteringOptions& opt = {}) {
  CnbtEmbedding emb = cnbt_embedding(g, K, variant, opt);
  const Method m = variant == NodeVariant::Out ? Method::CnbtOut : Method::CnbtIn;
  return detail::finish_run(m, K, emb.features, std::move(emb.eigenvalues), emb.restarts, opt);
}

/// Simplified comparison methods. Each is a canonical variant of the named
/// family, not a reproduction of a published implementation:
///   herm        top ceil(K/2) eigenvectors of A_i by |lambda|, (Re, Im)
///   simpleherm  top eigenvector of A_i by algebraic value, (Re, Im)
///   ddsym       top K eigenvectors of the degree-normalized A A^T + A^T A
///   disim       top K left and right singular vectors of the regularized
///               O^-1/2 A P^-1/2 (tau = mean degree), concatenated and
///               row-normalized
inline ClusteringRun baseline_cluster(const DirectedGraph& g, int K, Method method, const ClusteringOptions& opt = {}) {
  detail::check_cluster_args(g, K);
  const Vertex n = g.num_vertices();
  switch (method) {
    case Method::Herm:
    case Method::SimpleHerm: {
      const HermitianAdjacency h = hermitian_adjacency(g, Complex(0.0, 1.0));
      const bool herm = method == Method::Herm;
      const Eigen::Index count = herm ? (K + 1) / 2 : 1;
      const EigenPairs p = detail::hermitian_top(h.A, count, herm ? Which::LargestMagnitude : Which::LargestReal, opt);
      return detail::finish_run(method, K, make_features(p.vectors, false), p.values, p.restarts, opt);
    }
    case Method::DdSym: {
      const SparseR A = detail::adjacency(g);
      const SparseR At = A.transpose();
      const Eigen::VectorXd dout = A * Eigen::VectorXd::Ones(n);
      const Eigen::VectorXd din = At * Eigen::VectorXd::Ones(n);
      const Eigen::VectorXd so = detail::inv_sqrt(dout), si = detail::inv_sqrt(din);
      // D_out^-1/2 A D_in^-1/2 A^T D_out^-1/2 + D_in^-1/2 A^T D_out^-1/2 A D_in^-1/2
      const SparseR L = so.asDiagonal() * A * si.asDiagonal();
      const SparseR M = SparseR(L * SparseR(L.transpose())) + SparseR(SparseR(L.transpose()) * L);
      const SparseC Mc = M.cast<Complex>();
      const EigenPairs p = detail::hermitian_top(Mc, K, Which::LargestReal, opt);
      Eigen::MatrixXcd X = p.vectors.real().cast<Complex>();
      return detail::finish_run(method, K, make_features(std::move(X), false), p.values, p.restarts, opt);
    }
    case Method::DiSim: {
      const SparseR A = detail::adjacency(g);
      const Eigen::VectorXd dout = A * Eigen::VectorXd::Ones(n);
      const Eigen::VectorXd din = SparseR(A.transpose()) * Eigen::VectorXd::Ones(n);
      const double tau = n ? dout.mean() : 0.0;
      const Eigen::VectorXd o = detail::inv_sqrt((dout.array() + tau).matrix());
      const Eigen::VectorXd q = detail::inv_sqrt((din.array() + tau).matrix());
      const SparseR L = o.asDiagonal() * A * q.asDiagonal();
      const SparseC left = SparseR(L * SparseR(L.transpose())).cast<Complex>();
      const SparseC right = SparseR(SparseR(L.transpose()) * L).cast<Complex>();
      const EigenPairs pu = detail::hermitian_top(left, K, Which::LargestReal, opt);
      const EigenPairs pv = detail::hermitian_top(right, K, Which::LargestReal, opt);
      Eigen::MatrixXcd X(n, 2 * K);
      X << pu.vectors.real().cast<Complex>(), pv.vectors.real().cast<Complex>();
      std::vector<Complex> vals = pu.values;
      vals.insert(vals.end(), pv.values.begin(), pv.values.end());
      FeatureMatrix f = make_features(std::move(X), true);
      // Row-normalize the real embedding directly; imaginary parts are zero.
      return detail::finish_run(method, K, f, std::move(vals), pu.restarts + pv.restarts, opt);
    }
    case Method::CnbtOut:
    case Method::CnbtIn:
      break;
  }
  throw InvalidInput("baseline_cluster: not a baseline method: " + std::string(to_string(method)));
}

inline ClusteringRun cluster(const DirectedGraph& g, int K, Method method, const ClusteringOptions& opt = {}) {
  switch (method) {
    case Method::CnbtOut: return cnbt_sc(g, K, NodeVariant::Out, opt);
    case Method::CnbtIn: return cnbt_sc(g, K, NodeVariant::In, opt);
    default: return baseline_cluster(g, K, method, opt);
  }
}

}  // namespace cnbt
