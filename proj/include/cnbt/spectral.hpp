#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cnbt/eigensolver.hpp"
#include "cnbt/error.hpp"
#include "cnbt/graph.hpp"
#include "cnbt/matrices.hpp"

namespace cnbt {

/// Node-indexed views of an edge-indexed vector g:
///   in(u)  = sum over oriented edges v -> u of g_{v->u}
///   out(u) = sum over oriented edges u -> v of lambda_{u->v} g_{u->v}
struct NodeVectors {
  UnitRoot root;
  Eigen::VectorXcd out;
  Eigen::VectorXcd in;

  /// (out; in), the layout the reduced matrix acts on.
  Eigen::VectorXcd stacked() const {
    Eigen::VectorXcd s(out.size() + in.size());
    s << out, in;
    return s;
  }
};

inline NodeVectors node_vectors(const CnbtMatrix& c, Vertex n, const Eigen::VectorXcd& gvec) {
  if (gvec.size() != static_cast<Eigen::Index>(c.dim())) {
    throw InvalidInput("node_vectors: vector length " + std::to_string(gvec.size()) +
                       " does not match 2m = " + std::to_string(c.dim()));
  }
  NodeVectors nv;
  nv.root = c.root;
  nv.out = Eigen::VectorXcd::Zero(n);
  nv.in = Eigen::VectorXcd::Zero(n);
  for (std::size_t e = 0; e < c.dim(); ++e) {
    const Edge& oe = c.index[e];
    const auto ei = static_cast<Eigen::Index>(e);
    nv.out(oe.from) += c.lambda(ei) * gvec(ei);
    nv.in(oe.to) += gvec(ei);
  }
  return nv;
}

inline NodeVectors node_vectors(const DirectedGraph& g, Complex alpha, const Eigen::VectorXcd& gvec) {
  return node_vectors(cnbt_matrix(g, alpha), g.num_vertices(), gvec);
}

/// The linear map g -> (out; in) as a sparse 2n x 2m matrix.
inline SparseC node_transform(const CnbtMatrix& c, Vertex n) {
  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(2 * c.dim());
  for (std::size_t e = 0; e < c.dim(); ++e) {
    const Edge& oe = c.index[e];
    const auto ei = static_cast<Eigen::Index>(e);
    t.emplace_back(oe.from, ei, c.lambda(ei));
    t.emplace_back(n + oe.to, ei, Complex(1.0, 0.0));
  }
  SparseC T(2 * static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c.dim()));
  T.setFromTriplets(t.begin(), t.end());
  return T;
}

/// || nodes(B_alpha g) - K_alpha nodes(g) ||_inf for prebuilt matrices.
inline double edge_to_node_residual(const CnbtMatrix& c, const ReducedMatrix& r, Vertex n,
                                    const Eigen::VectorXcd& gvec) {
  const Eigen::VectorXcd Bg = c.B_alpha * gvec;
  const Eigen::VectorXcd lhs = node_vectors(c, n, Bg).stacked();
  const Eigen::VectorXcd rhs = r.K * node_vectors(c, n, gvec).stacked();
  return lhs.size() ? (lhs - rhs).cwiseAbs().maxCoeff() : 0.0;
}

inline double verify_edge_to_node(const DirectedGraph& g, Complex alpha, const Eigen::VectorXcd& gvec) {
  return edge_to_node_residual(cnbt_matrix(g, alpha), reduced_matrix(g, alpha), g.num_vertices(), gvec);
}

struct TransferResult {
  double residual = 0.0;   // ||K_alpha w - lambda w||
  double w_norm = 0.0;
  bool flagged = false;    // w numerically zero; residual is meaningless
  Eigen::VectorXcd w;
};

/// Maps an eigenpair (lambda, u) of B_alpha to (lambda, (u_out; u_in)) and
/// measures how well the latter is an eigenpair of the reduced matrix.
inline TransferResult eigpair_transfer(const CnbtMatrix& c, const ReducedMatrix& r, Vertex n,
                                       Complex lambda, const Eigen::VectorXcd& u) {
  TransferResult t;
  t.w = node_vectors(c, n, u).stacked();
  t.w_norm = t.w.norm();
  t.flagged = t.w_norm <= 1e-12;
  t.residual = t.w.size() ? (r.K * t.w - lambda * t.w).norm() : 0.0;
  return t;
}

/// log det(M) as log|det| + i arg(det), via partial-pivot LU. Returns -inf
/// real part for singular M.
inline Complex log_det(const Eigen::MatrixXcd& M) {
  detail::require(M.rows() == M.cols(), "log_det: matrix must be square");
  if (M.rows() == 0) return {0.0, 0.0};
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
  const Eigen::MatrixXcd& U = lu.matrixLU();
  Complex acc{0.0, 0.0};
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    const Complex d = U(i, i);
    if (d == Complex(0.0, 0.0)) return {-std::numeric_limits<double>::infinity(), 0.0};
    acc += std::log(d);
  }
  if (lu.permutationP().determinant() < 0) acc += Complex(0.0, std::numbers::pi);
  return {acc.real(), std::remainder(acc.imag(), 2.0 * std::numbers::pi)};
}

/// Both sides of the determinant identity in cross-multiplied log form:
///   lhs = log det(I - u B_alpha) + max(0, n-m) log(1 - u^2)
///   rhs = max(0, m-n) log(1 - u^2) + log det(I - u A_alpha + u^2 (D - I))
struct IharaSides {
  Complex lhs;
  Complex rhs;
};

inline IharaSides ihara_sides(const Eigen::MatrixXcd& B_alpha, const Eigen::MatrixXcd& A_alpha,
                              const Eigen::VectorXd& degrees, Complex u) {
  const Eigen::Index n = A_alpha.rows();
  const Eigen::Index m = B_alpha.rows() / 2;
  const Complex one_minus_u2 = Complex(1.0, 0.0) - u * u;
  if (std::abs(one_minus_u2) <= 1e-6) {
    throw InvalidInput("ihara: sample point too close to u = +-1");
  }
  const Eigen::MatrixXcd In = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd Im = Eigen::MatrixXcd::Identity(2 * m, 2 * m);
  Eigen::MatrixXcd DmI = degrees.cast<Complex>().asDiagonal();
  DmI -= In;
  const Complex log_prefactor = std::log(one_minus_u2);
  IharaSides s;
  s.lhs = log_det(Im - u * B_alpha) + static_cast<double>(std::max<Eigen::Index>(0, n - m)) * log_prefactor;
  s.rhs = static_cast<double>(std::max<Eigen::Index>(0, m - n)) * log_prefactor +
          log_det(In - u * A_alpha + u * u * DmI);
  return s;
}

/// |lhs/rhs - 1| computed from the log forms.
inline double relative_discrepancy(const IharaSides& s) {
  const bool lz = std::isinf(s.lhs.real()) && s.lhs.real() < 0;
  const bool rz = std::isinf(s.rhs.real()) && s.rhs.real() < 0;
  if (lz && rz) return 0.0;
  if (lz || rz) return 1.0;
  return std::abs(std::exp(s.lhs - s.rhs) - Complex(1.0, 0.0));
}

/// Maximum relative discrepancy between the two sides of
/// det(I - u B_alpha) = (1 - u^2)^(m-n) det(I - u A_alpha + u^2 (D - I))
/// over the sample points.
inline double verify_ihara(const DirectedGraph& g, Complex alpha, const std::vector<Complex>& u_samples) {
  const Eigen::MatrixXcd B = cnbt_matrix(g, alpha).dense();
  const Eigen::MatrixXcd A = hermitian_adjacency(g, alpha).dense();
  const Eigen::VectorXd d = degree_vector(g);
  double worst = 0.0;
  for (const Complex& u : u_samples) worst = std::max(worst, relative_discrepancy(ihara_sides(B, A, d, u)));
  return worst;
}

}  // namespace cnbt
