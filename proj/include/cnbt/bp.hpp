#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cnbt/error.hpp"
#include "cnbt/graph.hpp"
#include "cnbt/matrices.hpp"

namespace cnbt {

/// Sparse-regime BP model: pair probabilities c_ab / N, prior psi, and the
/// normalized affinity T = c_ab / c with c the common row sum of c_ab.
struct BpModel {
  int K = 0;
  Eigen::MatrixXd c_matrix;
  Eigen::VectorXd prior;  // psi(a)
  double c = 0.0;
  Eigen::MatrixXd T;

  static BpModel uniform(const Eigen::MatrixXd& c_matrix) {
    const auto K = static_cast<int>(c_matrix.rows());
    detail::require(K >= 1 && c_matrix.cols() == K, "affinity matrix must be square and non-empty");
    detail::require((c_matrix.array() >= 0.0).all() && c_matrix.allFinite(),
                    "affinity entries must be finite and non-negative");
    BpModel m;
    m.K = K;
    m.c_matrix = c_matrix;
    m.prior = Eigen::VectorXd::Constant(K, 1.0 / K);
    m.c = c_matrix.rowwise().sum().mean();
    detail::require(m.c > 0.0, "affinity matrix must have a positive row sum");
    m.T = c_matrix / m.c;
    return m;
  }
};

/// Messages nu_{i_e -> t_e} as rows of a 2m x K matrix, indexed like
/// OrientedEdgeIndex.
using Messages = Eigen::MatrixXd;

inline Messages uniform_messages(const OrientedEdgeIndex& idx, int K) {
  return Messages::Constant(static_cast<Eigen::Index>(idx.size()), K, 1.0 / K);
}

/// Messages biased toward the sender's label: (1 - s)/K + s [a = label].
inline Messages informed_messages(const OrientedEdgeIndex& idx, const std::vector<int>& labels, int K,
                                  double strength) {
  Messages msg = uniform_messages(idx, K) * (1.0 - strength);
  for (std::size_t e = 0; e < idx.size(); ++e) msg(static_cast<Eigen::Index>(e), labels.at(idx[e].from)) += strength;
  return msg;
}

namespace detail {

// log of Sum_b c_ab nu(b) for every a.
inline Eigen::VectorXd log_factor(const BpModel& m, const Eigen::VectorXd& nu) {
  return (m.c_matrix * nu).array().log().matrix();
}

inline Eigen::VectorXd normalize_log(const Eigen::VectorXd& logp, bool& ok) {
  const double mx = logp.maxCoeff();
  ok = std::isfinite(mx);
  if (!ok) return logp;
  Eigen::VectorXd p = (logp.array() - mx).exp().matrix();
  return p / p.sum();
}

}  // namespace detail

/// Marginals nu_u(a) propto psi(a) e^{-h(a)} Prod_{w in N_u} Sum_b c_ab nu_{w->u}(b).
/// `h` may be empty for a field-free evaluation.
inline Eigen::MatrixXd bp_marginals(const BpModel& m, const OrientedEdgeIndex& idx, Vertex n, const Messages& msg,
                                    const Eigen::VectorXd& h) {
  Eigen::MatrixXd out(n, m.K);
  const Eigen::VectorXd base =
      m.prior.array().log().matrix() - (h.size() ? h : Eigen::VectorXd::Zero(m.K));
  for (Vertex u = 0; u < n; ++u) {
    Eigen::VectorXd lp = base;
    for (std::size_t e : idx.incoming(u)) lp += detail::log_factor(m, msg.row(static_cast<Eigen::Index>(e)).transpose());
    bool ok = false;
    const Eigen::VectorXd p = detail::normalize_log(lp, ok);
    if (!ok) throw NumericalError("BP normalization underflow in the marginal of vertex " + std::to_string(u) +
                                  " (incoming messages are incompatible)");
    out.row(u) = p.transpose();
  }
  return out;
}

/// h(a) = (1/N) Sum_w Sum_b c_ab nu_w(b).
inline Eigen::VectorXd external_field(const BpModel& m, const Eigen::MatrixXd& marginals) {
  const double N = static_cast<double>(marginals.rows());
  return N > 0 ? Eigen::VectorXd(m.c_matrix * marginals.colwise().sum().transpose() / N)
               : Eigen::VectorXd(Eigen::VectorXd::Zero(m.K));
}

/// One synchronous sweep: the field is recomputed from the current marginals,
/// then every message is refreshed from the previous message set.
inline Messages bp_update(const BpModel& m, const OrientedEdgeIndex& idx, Vertex n, const Messages& msg) {
  detail::require(msg.rows() == static_cast<Eigen::Index>(idx.size()) && msg.cols() == m.K,
                  "bp_update: message array has wrong shape");
  // log Sum_b c_ab nu_e(b) per oriented edge, shared by all outgoing messages.
  std::vector<Eigen::VectorXd> logs(idx.size());
  for (std::size_t e = 0; e < idx.size(); ++e) logs[e] = detail::log_factor(m, msg.row(static_cast<Eigen::Index>(e)).transpose());

  // Neighbour products first, so an underflow is reported against its message.
  std::vector<Eigen::VectorXd> products(idx.size());
  for (std::size_t e = 0; e < idx.size(); ++e) {
    const Edge& uv = idx[e];
    Eigen::VectorXd lp = m.prior.array().log().matrix();
    const std::size_t back = idx.reverse_of(e);  // v -> u
    for (std::size_t in : idx.incoming(uv.from)) {
      if (in != back) lp += logs[in];
    }
    if (!std::isfinite(lp.maxCoeff())) {
      throw NumericalError("BP normalization underflow on message " + std::to_string(uv.from) + "->" +
                           std::to_string(uv.to));
    }
    products[e] = std::move(lp);
  }

  const Eigen::VectorXd h = external_field(m, bp_marginals(m, idx, n, msg, Eigen::VectorXd()));
  Messages next(msg.rows(), msg.cols());
  for (std::size_t e = 0; e < idx.size(); ++e) {
    bool ok = false;
    next.row(static_cast<Eigen::Index>(e)) = detail::normalize_log(products[e] - h, ok).transpose();
  }
  return next;
}

inline Messages bp_update(const BpModel& m, const DirectedGraph& g, const Messages& msg) {
  return bp_update(m, OrientedEdgeIndex(g), g.num_vertices(), msg);
}

struct BpRun {
  Messages messages;
  Eigen::MatrixXd marginals;
  std::vector<int> labels;  // argmax of marginals
  int sweeps = 0;
  double last_change = 0.0;  // max |nu' - nu| of the final sweep
};

inline BpRun run_bp(const BpModel& m, const DirectedGraph& g, Messages init, int max_sweeps, double tol = 1e-10) {
  const OrientedEdgeIndex idx(g);
  BpRun r;
  r.messages = std::move(init);
  for (r.sweeps = 0; r.sweeps < max_sweeps;) {
    Messages next = bp_update(m, idx, g.num_vertices(), r.messages);
    r.last_change = next.size() ? (next - r.messages).cwiseAbs().maxCoeff() : 0.0;
    r.messages = std::move(next);
    ++r.sweeps;
    if (r.last_change <= tol) break;
  }
  const Eigen::MatrixXd raw = bp_marginals(m, idx, g.num_vertices(), r.messages, Eigen::VectorXd());
  r.marginals = bp_marginals(m, idx, g.num_vertices(), r.messages, external_field(m, raw));
  r.labels.resize(g.num_vertices());
  for (Vertex u = 0; u < g.num_vertices(); ++u) r.marginals.row(u).maxCoeff(&r.labels[u]);
  return r;
}

/// Perturbation delta in C^{2mK}, stored edge index fastest:
/// delta = (delta_1(1), ..., delta_2m(1), delta_1(2), ..., delta_2m(K)).
/// mat() views it as the 2m x K matrix whose row e is delta_e.
struct PerturbationState {
  Eigen::VectorXcd delta;
  Eigen::Index edges = 0;  // 2m
  int K = 0;

  PerturbationState() = default;
  PerturbationState(Eigen::VectorXcd d, Eigen::Index two_m, int k) : delta(std::move(d)), edges(two_m), K(k) {
    detail::require(delta.size() == two_m * k, "perturbation length must equal 2m * K");
  }

  static PerturbationState from_mat(const Eigen::MatrixXcd& M) {
    return {Eigen::Map<const Eigen::VectorXcd>(M.data(), M.size()), M.rows(), static_cast<int>(M.cols())};
  }

  Eigen::Map<const Eigen::MatrixXcd> mat() const { return {delta.data(), edges, K}; }
};

/// mat(delta') = B mat(delta) T^T, i.e. delta' = (T kron B) delta.
inline PerturbationState linearized_step(const SparseC& B, const Eigen::MatrixXd& T, const PerturbationState& s) {
  detail::require(B.rows() == B.cols() && B.cols() == s.edges, "linearized_step: B does not match 2m");
  detail::require(T.rows() == s.K && T.cols() == s.K, "linearized_step: T does not match K");
  const Eigen::MatrixXcd next = (B * s.mat()) * T.transpose().cast<Complex>();
  return PerturbationState::from_mat(next);
}

inline PerturbationState linearized_step(const Eigen::MatrixXcd& B, const Eigen::MatrixXd& T,
                                         const PerturbationState& s) {
  detail::require(B.rows() == B.cols() && B.cols() == s.edges, "linearized_step: B does not match 2m");
  detail::require(T.rows() == s.K && T.cols() == s.K, "linearized_step: T does not match K");
  const Eigen::MatrixXcd next = B * s.mat() * T.transpose().cast<Complex>();
  return PerturbationState::from_mat(next);
}

/// Two circulant affinity patterns with a cyclic cluster orientation.
///   T1: e if a+1 = b (mod K), 1-e if b+1 = a, 0.5 otherwise; e in (0.5, 1)
///   T2: f if a+1 = b (mod K), g otherwise; f > g > 0
struct CirculantPattern {
  enum class Kind : std::uint8_t { T1, T2 };
  Kind kind = Kind::T1;
  int K = 0;
  double e = 0.0;
  double f = 0.0;
  double g = 0.0;

  /// First row p_l, so that matrix()(a, b) = p_{(b - a) mod K}.
  Eigen::VectorXd first_row() const {
    Eigen::VectorXd p(K);
    if (kind == Kind::T1) {
      p.setConstant(0.5);
      p(1) = e;
      p(K - 1) = 1.0 - e;
    } else {
      p.setConstant(g);
      p(1) = f;
    }
    return p;
  }

  Eigen::MatrixXd matrix() const {
    const Eigen::VectorXd p = first_row();
    Eigen::MatrixXd T(K, K);
    for (int a = 0; a < K; ++a)
      for (int b = 0; b < K; ++b) T(a, b) = p(((b - a) % K + K) % K);
    return T;
  }
};

inline CirculantPattern make_t1(int K, double e) {
  detail::require(K >= 3, "T1 needs K >= 3");
  detail::require(e > 0.5 && e < 1.0, "T1 parameter e must lie in (0.5, 1)");
  return {CirculantPattern::Kind::T1, K, e, 0.0, 0.0};
}

inline CirculantPattern make_t2(int K, double f, double g) {
  detail::require(K >= 2, "T2 needs K >= 2");
  detail::require(g > 0.0 && f > g, "T2 parameters must satisfy f > g > 0");
  return {CirculantPattern::Kind::T2, K, 0.0, f, g};
}

/// Closed-form eigenvalues, index k = 0..K-1.
inline std::vector<Complex> circulant_spectrum(const CirculantPattern& p) {
  std::vector<Complex> out(p.K);
  const double K = p.K;
  for (int k = 0; k < p.K; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / K;
    if (p.kind == CirculantPattern::Kind::T1) {
      out[k] = k == 0 ? Complex(K / 2.0, 0.0) : Complex(0.0, (2.0 * p.e - 1.0) * std::sin(angle));
    } else {
      out[k] = k == 0 ? Complex(p.f + (K - 1.0) * p.g, 0.0) : (p.f - p.g) * std::polar(1.0, angle);
    }
  }
  return out;
}

}  // namespace cnbt
