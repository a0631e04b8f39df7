#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cnbt/error.hpp"
#include "cnbt/matrices.hpp"

namespace cnbt {

/// Which end of the spectrum to extract.
enum class Which : std::uint8_t {
  LargestReal,       // descending real part, then imaginary part, then modulus
  LargestMagnitude,  // descending modulus, then real part, then imaginary part
};

/// Eigenpairs sorted under the requested ordering. Vectors are unit-norm
/// columns; residuals[i] = ||M v_i - lambda_i v_i||.
struct EigenPairs {
  std::vector<Complex> values;
  Eigen::MatrixXcd vectors;
  std::vector<double> residuals;
  double matrix_norm = 0.0;
  int restarts = 0;

  std::size_t size() const { return values.size(); }
};

/// Strict weak ordering: true when a comes before b.
inline bool precedes(Which which, Complex a, Complex b) {
  if (which == Which::LargestMagnitude && std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
  if (a.real() != b.real()) return a.real() > b.real();
  if (a.imag() != b.imag()) return a.imag() > b.imag();
  return std::abs(a) > std::abs(b);
}

/// Relative width within which primary keys count as tied. Spectra of B_alpha
/// are closed under conjugation, so exact ties in the real part are common and
/// rounding must not decide between the two members of a pair.
inline constexpr double kTieTolerance = 1e-9;

/// Indices sorted by precedes(), except that runs whose primary key (real part
/// or modulus) agrees within kTieTolerance * max|lambda| are re-sorted by
/// descending imaginary part.
inline std::vector<Eigen::Index> ordering(Which which, const Eigen::VectorXcd& values) {
  std::vector<Eigen::Index> idx(values.size());
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return precedes(which, values(a), values(b)); });
  if (idx.empty()) return idx;
  const double width = kTieTolerance * std::max(values.cwiseAbs().maxCoeff(), 1.0);
  auto key = [&](Eigen::Index i) { return which == Which::LargestMagnitude ? std::abs(values(i)) : values(i).real(); };
  std::size_t start = 0;
  for (std::size_t i = 1; i <= idx.size(); ++i) {
    if (i < idx.size() && key(idx[i - 1]) - key(idx[i]) <= width) continue;
    std::stable_sort(idx.begin() + static_cast<std::ptrdiff_t>(start), idx.begin() + static_cast<std::ptrdiff_t>(i),
                     [&](Eigen::Index a, Eigen::Index b) { return values(a).imag() > values(b).imag(); });
    start = i;
  }
  return idx;
}

namespace detail {

// Residual contract shared by all solvers.
inline constexpr double kResidualFactor = 1e-8;

inline void check_residuals(const EigenPairs& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.residuals[i] > kResidualFactor * std::max(p.matrix_norm, 1e-300)) {
      std::ostringstream os;
      os << "eigensolver did not converge: pair " << i << " (lambda=" << p.values[i]
         << ") residual " << p.residuals[i] << " exceeds " << kResidualFactor << " * ||M|| = "
         << kResidualFactor * p.matrix_norm;
      throw NumericalError(os.str());
    }
  }
}

inline double sparse_norm_bound(const SparseC& M) {
  // ||M||_2 <= sqrt(||M||_1 ||M||_inf)
  Eigen::VectorXd col = Eigen::VectorXd::Zero(M.cols());
  Eigen::VectorXd row = Eigen::VectorXd::Zero(M.rows());
  for (Eigen::Index c = 0; c < M.outerSize(); ++c) {
    for (SparseC::InnerIterator it(M, c); it; ++it) {
      col(it.col()) += std::abs(it.value());
      row(it.row()) += std::abs(it.value());
    }
  }
  const double n1 = col.size() ? col.maxCoeff() : 0.0;
  const double ninf = row.size() ? row.maxCoeff() : 0.0;
  return std::sqrt(n1 * ninf);
}

}  // namespace detail

/// Dense eigendecomposition returning the first k pairs under `which`.
inline EigenPairs eigendecompose(const Eigen::MatrixXcd& M, Eigen::Index k,
                                 Which which = Which::LargestReal) {
  detail::require(M.rows() == M.cols(), "eigendecompose: matrix must be square");
  detail::require(k >= 0 && k <= M.rows(), "eigendecompose: requested count exceeds dimension");
  detail::require(M.allFinite(), "eigendecompose: matrix has non-finite entries");
  EigenPairs out;
  out.matrix_norm = M.rows() ? M.operatorNorm() : 0.0;
  if (k == 0) {
    out.vectors.resize(M.rows(), 0);
    return out;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(M, true);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecompose: Schur iteration failed");
  const auto order = ordering(which, solver.eigenvalues());
  out.vectors.resize(M.rows(), k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::Index j = order[i];
    const Complex lambda = solver.eigenvalues()(j);
    Eigen::VectorXcd v = solver.eigenvectors().col(j);
    v.normalize();
    out.values.push_back(lambda);
    out.vectors.col(i) = v;
    out.residuals.push_back((M * v - lambda * v).norm());
  }
  detail::check_residuals(out);
  return out;
}

struct ArnoldiOptions {
  Which which = Which::LargestReal;
  Eigen::Index ncv = 0;             // Krylov dimension; 0 picks max(2k + 1, 40)
  int max_restarts = 3000;
  double tol = 1e-12;               // relative Ritz residual tolerance
  std::uint64_t seed = 0x5eed;      // starting vector
  Eigen::Index dense_limit = 300;   // at or below this dimension, solve densely
};

using LinearOperator = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

/// Implicitly restarted Arnoldi with exact shifts, for a few eigenpairs at
/// one end of the spectrum of a large operator.
inline EigenPairs partial_eigs(const LinearOperator& apply, Eigen::Index dim, Eigen::Index k,
                               double norm_estimate, const ArnoldiOptions& opt = {}) {
  using Eigen::Index;
  using Eigen::MatrixXcd;
  using Eigen::VectorXcd;
  detail::require(k >= 0 && k <= dim, "partial_eigs: requested count exceeds dimension");
  EigenPairs out;
  out.matrix_norm = norm_estimate;
  if (k == 0) {
    out.vectors.resize(dim, 0);
    return out;
  }
  Index ncv = opt.ncv > 0 ? opt.ncv : std::max<Index>(2 * k + 1, 40);
  ncv = std::min(ncv, dim);
  detail::require(ncv > k || ncv == dim, "partial_eigs: Krylov dimension must exceed k");

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  auto random_vector = [&] {
    VectorXcd v(dim);
    for (Index i = 0; i < dim; ++i) v(i) = Complex(normal(rng), normal(rng));
    return v;
  };

  MatrixXcd V = MatrixXcd::Zero(dim, ncv);
  MatrixXcd H = MatrixXcd::Zero(ncv, ncv);
  VectorXcd f = random_vector();
  const double eps = std::numeric_limits<double>::epsilon();
  const double breakdown = eps * std::max(norm_estimate, 1.0) * 10.0;

  // Extends an Arnoldi factorization of size j0 to ncv. f holds the residual.
  auto extend = [&](Index j0) {
    for (Index j = j0; j < ncv; ++j) {
      double beta = f.norm();
      if (j > 0 && beta <= breakdown) {
        // Invariant subspace found; continue with a fresh orthogonal direction.
        for (int attempt = 0; attempt < 3 && beta <= breakdown; ++attempt) {
          f = random_vector();
          for (int pass = 0; pass < 2; ++pass) f -= V.leftCols(j) * (V.leftCols(j).adjoint() * f);
          beta = f.norm();
        }
        V.col(j) = f / beta;
        H(j, j - 1) = Complex(0.0, 0.0);
      } else {
        V.col(j) = f / beta;
        if (j > 0) H(j, j - 1) = beta;
      }
      VectorXcd w = apply(V.col(j));
      VectorXcd h = V.leftCols(j + 1).adjoint() * w;
      w -= V.leftCols(j + 1) * h;
      VectorXcd h2 = V.leftCols(j + 1).adjoint() * w;
      w -= V.leftCols(j + 1) * h2;
      h += h2;
      H.col(j).head(j + 1) = h;
      f = w;
    }
  };

  // With ncv == dim one pass gives an exact similarity and no restarts.
  extend(0);

  Eigen::ComplexEigenSolver<MatrixXcd> small;
  std::vector<Index> order;
  int restart = 0;
  for (;; ++restart) {
    small.compute(H, true);
    if (small.info() != Eigen::Success) throw NumericalError("partial_eigs: projected eigenproblem failed");
    order = ordering(opt.which, small.eigenvalues());
    if (ncv == dim) break;
    const double beta = f.norm();
    Index nconv = 0;
    for (Index i = 0; i < k; ++i) {
      const Index j = order[i];
      const double est = beta * std::abs(small.eigenvectors()(ncv - 1, j)) / small.eigenvectors().col(j).norm();
      if (est <= opt.tol * std::max(std::abs(small.eigenvalues()(j)), eps * norm_estimate + 1e-300)) ++nconv;
    }
    if (nconv >= k || restart >= opt.max_restarts) break;

    // Keep k plus some extra wanted Ritz values to avoid stagnation.
    const Index keep = std::min<Index>(ncv - 1, k + std::min<Index>(nconv, (ncv - k) / 2) + 1);
    MatrixXcd Qacc = MatrixXcd::Identity(ncv, ncv);
    for (Index s = keep; s < ncv; ++s) {
      const Complex mu = small.eigenvalues()(order[s]);
      for (Index i = 0; i < ncv; ++i) H(i, i) -= mu;
      std::vector<Eigen::JacobiRotation<Complex>> rots(ncv - 1);
      for (Index j = 0; j + 1 < ncv; ++j) {
        rots[j].makeGivens(H(j, j), H(j + 1, j));
        H.applyOnTheLeft(j, j + 1, rots[j].adjoint());
      }
      for (Index j = 0; j + 1 < ncv; ++j) {
        H.applyOnTheRight(j, j + 1, rots[j]);
        Qacc.applyOnTheRight(j, j + 1, rots[j]);
      }
      for (Index i = 0; i < ncv; ++i) H(i, i) += mu;
      for (Index c = 0; c < ncv; ++c)
        for (Index r = c + 2; r < ncv; ++r) H(r, c) = Complex(0.0, 0.0);
    }
    f = V * Qacc.col(keep) * H(keep, keep - 1) + f * Qacc(ncv - 1, keep - 1);
    V.leftCols(keep) = (V * Qacc.leftCols(keep)).eval();
    H.bottomRows(ncv - keep).setZero();
    H.rightCols(ncv - keep).setZero();
    extend(keep);
  }

  out.restarts = restart;
  out.vectors.resize(dim, k);
  for (Index i = 0; i < k; ++i) {
    const Index j = order[i];
    const Complex lambda = small.eigenvalues()(j);
    VectorXcd x = V * small.eigenvectors().col(j);
    x.normalize();
    out.values.push_back(lambda);
    out.vectors.col(i) = x;
    out.residuals.push_back((apply(x) - lambda * x).norm());
  }
  detail::check_residuals(out);
  return out;
}

/// Eigenpairs of a sparse matrix: dense solve for small dimensions,
/// implicitly restarted Arnoldi otherwise.
inline EigenPairs eigendecompose(const SparseC& M, Eigen::Index k, const ArnoldiOptions& opt = {}) {
  detail::require(M.rows() == M.cols(), "eigendecompose: matrix must be square");
  if (M.rows() <= opt.dense_limit) return eigendecompose(Eigen::MatrixXcd(M), k, opt.which);
  auto apply = [&M](const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return M * x; };
  return partial_eigs(apply, M.rows(), k, detail::sparse_norm_bound(M), opt);
}

}  // namespace cnbt
