// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#include "isacdrt/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace isacdrt::numkit {

CVector vec(const CMatrix& a) {
  return CVector(Eigen::Map<const CVector>(a.data(), a.size()));
}

CMatrix unvec(const CVector& v, Index rows, Index cols) {
  if (v.size() != rows * cols) {
    throw std::domain_error("unvec: size mismatch");
  }
  return CMatrix(Eigen::Map<const CMatrix>(v.data(), rows, cols));
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix commutation_matrix(Index m, Index n) {
  if (m < 1 || n < 1) throw std::domain_error("commutation_matrix: dims must be >= 1");
  CMatrix k = CMatrix::Zero(m * n, m * n);
  // vec(A) puts A(i,j) at i + j*m; vec(A^T) puts it at j + i*n.
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      k(j + i * n, i + j * m) = 1.0;
    }
  }
  return k;
}

CMatrix hermitize(const CMatrix& h) { return 0.5 * (h + h.adjoint()); }

bool is_hermitian(const CMatrix& h, double rel_tol) {
  if (h.rows() != h.cols()) return false;
  const double scale = std::max(h.cwiseAbs().maxCoeff(), 1e-300);
  return (h - h.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

EigDecomposition hermitian_eig(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitize(h));
  if (solver.info() != Eigen::Success) {
    throw NumericError("hermitian_eig: eigensolver did not converge");
  }
  // Eigen returns ascending order; flip to descending.
  EigDecomposition out;
  out.lambdas = solver.eigenvalues().reverse();
  out.eigvecs = solver.eigenvectors().rowwise().reverse();
  return out;
}

double logdet_pd(const CMatrix& h) {
  const EigDecomposition eig = hermitian_eig(h);
  const double largest = eig.lambdas(0);
  const double smallest = eig.lambdas(eig.lambdas.size() - 1);
  if (largest <= 0.0 || smallest <= 1e-12 * largest) {
    throw std::domain_error("logdet_pd: matrix is not positive definite");
  }
  double acc = 0.0;
  for (Index i = 0; i < eig.lambdas.size(); ++i) acc += std::log2(eig.lambdas(i));
  return acc;
}

Index numerical_rank(const CMatrix& a, double rtol) {
  if (rtol <= 0.0 || rtol >= 1.0) throw std::domain_error("numerical_rank: rtol must be in (0,1)");
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double smax = sv(0);
  if (smax <= 0.0) return 0;
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rtol * smax) ++rank;
  }
  return rank;
}

RVector project_trace_simplex(const RVector& v, double budget) {
  if (budget < 0.0) throw std::domain_error("project_trace_simplex: budget must be >= 0");
  const Index n = v.size();
  if (n == 0) return v;
  if (budget == 0.0) return RVector::Zero(n);

  std::vector<double> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());

  // Largest k with sorted[k-1] - theta_k > 0, theta_k = (prefix_k - budget)/k.
  double prefix = 0.0;
  double theta = (std::accumulate(sorted.begin(), sorted.end(), 0.0) - budget) /
                 static_cast<double>(n);
  for (Index k = 1; k <= n; ++k) {
    prefix += sorted[static_cast<std::size_t>(k - 1)];
    const double cand = (prefix - budget) / static_cast<double>(k);
    if (k == n || sorted[static_cast<std::size_t>(k)] - cand <= 0.0) {
      theta = cand;
      break;
    }
  }

  RVector out(n);
  for (Index i = 0; i < n; ++i) out(i) = std::max(v(i) - theta, 0.0);
  // One exactness pass: distribute the rounding slack over the support.
  const double slack = budget - out.sum();
  if (slack != 0.0) {
    Index support = 0;
    for (Index i = 0; i < n; ++i) {
      if (out(i) > 0.0) ++support;
    }
    if (support > 0) {
      const double bump = slack / static_cast<double>(support);
      for (Index i = 0; i < n; ++i) {
        if (out(i) > 0.0) out(i) = std::max(out(i) + bump, 0.0);
      }
    }
  }
  return out;
}

CMatrix psd_sqrt(const CMatrix& h) {
  const EigDecomposition eig = hermitian_eig(h);
  const double largest = std::max(eig.lambdas(0), 0.0);
  RVector clipped = eig.lambdas;
  for (Index i = 0; i < clipped.size(); ++i) {
    if (clipped(i) < 0.0) {
      if (clipped(i) < -1e-12 * std::max(largest, 1e-300)) {
        throw std::domain_error("psd_sqrt: matrix is indefinite");
      }
      clipped(i) = 0.0;
    }
  }
  return eig.eigvecs * clipped.cwiseSqrt().asDiagonal() * eig.eigvecs.adjoint();
}

void require_psd(const CMatrix& h, const char* who, double rel_tol) {
  const EigDecomposition eig = hermitian_eig(h);
  const double scale = std::max({std::abs(eig.lambdas(0)),
                                 std::abs(eig.lambdas(eig.lambdas.size() - 1)), 1.0});
  if (eig.lambdas(eig.lambdas.size() - 1) < -rel_tol * scale) {
    throw std::domain_error(std::string(who) + ": matrix is not positive semidefinite");
  }
}

CMatrix pd_inverse(const CMatrix& h, const char* who) {
  Eigen::LLT<CMatrix> llt(hermitize(h));
  if (llt.info() == Eigen::Success) {
    return llt.solve(CMatrix::Identity(h.rows(), h.cols()));
  }
  const EigDecomposition eig = hermitian_eig(h);
  const double smallest = eig.lambdas(eig.lambdas.size() - 1);
  if (smallest <= 0.0) {
    throw NumericError(std::string(who) + ": matrix is numerically singular");
  }
  return eig.eigvecs * eig.lambdas.cwiseInverse().cast<Complex>().asDiagonal() *
         eig.eigvecs.adjoint();
}

}  // namespace isacdrt::numkit
