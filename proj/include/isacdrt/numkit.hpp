// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#pragma once

#include "isacdrt/types.hpp"

namespace isacdrt::numkit {

/// Hermitian eigendecomposition with eigenvalues sorted descending.
struct EigDecomposition {
  CMatrix eigvecs;  // unitary, column i pairs with lambdas[i]
  RVector lambdas;  // real, descending
};

/// Column-stacking vectorization.
CVector vec(const CMatrix& a);

/// Inverse of vec for a known shape.
CMatrix unvec(const CVector& v, Index rows, Index cols);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// The mn x mn 0/1 permutation K with K * vec(A) = vec(A^T) for every m x n A.
/// For square factors it swaps Kronecker order: K (B kron C) K^T = C kron B
/// with B n x n and C m x m.
CMatrix commutation_matrix(Index m, Index n);

/// Throws NumericError on solver failure.
EigDecomposition hermitian_eig(const CMatrix& h);

/// Base-2 log-determinant of a positive definite Hermitian matrix.
/// Requires min eigenvalue > 1e-12 * max eigenvalue; otherwise std::domain_error.
double logdet_pd(const CMatrix& h);

/// Count of singular values above rtol * sigma_max; zero matrix has rank 0.
Index numerical_rank(const CMatrix& a, double rtol = 1e-10);

/// Euclidean projection of a real vector onto {x >= 0, sum x = budget}.
RVector project_trace_simplex(const RVector& v, double budget);

// -- shared helpers -----------------------------------------------------

/// (H + H^H)/2.
CMatrix hermitize(const CMatrix& h);

bool is_hermitian(const CMatrix& h, double rel_tol = 1e-12);

/// Hermitian square root via eigendecomposition. Eigenvalues in
/// [-1e-12 * lambda_max, 0) are clipped to 0; anything lower throws
/// std::domain_error (genuinely indefinite input).
CMatrix psd_sqrt(const CMatrix& h);

/// Throws std::domain_error when a supposed-PSD matrix has an eigenvalue
/// below -rel_tol * max(|lambda|, 1).
void require_psd(const CMatrix& h, const char* who, double rel_tol = 1e-9);

/// Inverse of a Hermitian PD matrix via Cholesky, eigendecomposition as the
/// conditioning fallback. Throws NumericError when both routes fail.
CMatrix pd_inverse(const CMatrix& h, const char* who);

}  // namespace isacdrt::numkit
