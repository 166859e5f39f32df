// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#include <doctest.h>

#include <cmath>
#include <random>

#include "isacdrt/numkit.hpp"
#include "oracles.hpp"

using namespace isacdrt;
using namespace isacdrt::numkit;

TEST_CASE("vec stacks columns") {
  CMatrix a(2, 2);
  a << Complex(1, 0), Complex(3, 0), Complex(2, 0), Complex(4, 0);  // [[1,3],[2,4]]
  const CVector v = vec(a);
  CHECK(v(0) == Complex(1, 0));
  CHECK(v(1) == Complex(2, 0));
  CHECK(v(2) == Complex(3, 0));
  CHECK(v(3) == Complex(4, 0));

  const CMatrix col = oracles::random_cmatrix(5, 1, 11);
  CHECK((vec(col) - col.col(0)).norm() == 0.0);

  const CVector eye = vec(CMatrix::Identity(2, 2));
  CHECK(eye(0) == Complex(1, 0));
  CHECK(eye(1) == Complex(0, 0));
  CHECK(eye(2) == Complex(0, 0));
  CHECK(eye(3) == Complex(1, 0));

  CHECK((unvec(vec(a), 2, 2) - a).norm() == 0.0);
}

TEST_CASE("kron basics and the vec identity") {
  const CMatrix b = oracles::random_cmatrix(2, 3, 21);

  const CMatrix block = kron(CMatrix::Identity(2, 2), b);
  CHECK((block.topLeftCorner(2, 3) - b).norm() == 0.0);
  CHECK(block.topRightCorner(2, 3).norm() == 0.0);
  CHECK((block.bottomRightCorner(2, 3) - b).norm() == 0.0);

  CMatrix scalar(1, 1);
  scalar(0, 0) = Complex(2, -1);
  CHECK((kron(scalar, b) - Complex(2, -1) * b).norm() == 0.0);

  // vec(B X A^T) = (A kron B) vec(X)
  const CMatrix a = oracles::random_cmatrix(2, 2, 22);
  const CMatrix b2 = oracles::random_cmatrix(2, 2, 23);
  const CMatrix x = oracles::random_cmatrix(2, 2, 24);
  const CVector lhs = vec(b2 * x * a.transpose());
  const CVector rhs = kron(a, b2) * vec(x);
  CHECK((lhs - rhs).norm() < 1e-13);
}

TEST_CASE("commutation matrix satisfies its defining property") {
  CHECK((commutation_matrix(1, 4) - CMatrix::Identity(4, 4)).norm() == 0.0);

  const CMatrix k22 = commutation_matrix(2, 2);
  CMatrix expected = CMatrix::Zero(4, 4);
  expected(0, 0) = expected(1, 2) = expected(2, 1) = expected(3, 3) = 1.0;
  CHECK((k22 - expected).norm() == 0.0);

  const CMatrix k32 = commutation_matrix(3, 2);
  CHECK((k32 * k32.adjoint() - CMatrix::Identity(6, 6)).norm() == 0.0);

  for (Index m = 1; m <= 4; ++m) {
    for (Index n = 1; n <= 4; ++n) {
      const CMatrix k = commutation_matrix(m, n);
      for (int rep = 0; rep < 50; ++rep) {
        const CMatrix a = oracles::random_cmatrix(
            m, n, 1000 + static_cast<std::uint64_t>(100 * m + 10 * n + rep));
        CHECK((k * vec(a) - vec(a.transpose())).cwiseAbs().maxCoeff() < 1e-15);
      }
    }
  }
}

TEST_CASE("commutation matrix swaps square Kronecker factors") {
  const Index m = 3, n = 2;
  const CMatrix k = commutation_matrix(m, n);
  const CMatrix b = oracles::random_cmatrix(n, n, 31);  // n x n first factor
  const CMatrix c = oracles::random_cmatrix(m, m, 32);  // m x m second factor
  const CMatrix lhs = k * kron(b, c) * k.transpose();
  CHECK((lhs - kron(c, b)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("hermitian_eig examples and properties") {
  CMatrix d(2, 2);
  d << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(0.25, 0);
  const auto eig = hermitian_eig(d);
  CHECK(eig.lambdas(0) == doctest::Approx(1.0));
  CHECK(eig.lambdas(1) == doctest::Approx(0.25));

  const auto eye = hermitian_eig(CMatrix::Identity(3, 3));
  for (Index i = 0; i < 3; ++i) CHECK(eye.lambdas(i) == doctest::Approx(1.0));

  const CMatrix h = oracles::random_pd(4, 41);
  const auto e = hermitian_eig(h);
  CHECK((e.eigvecs.adjoint() * e.eigvecs - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() <
        1e-10);
  const CMatrix rebuilt =
      e.eigvecs * e.lambdas.cast<Complex>().asDiagonal() * e.eigvecs.adjoint();
  CHECK((rebuilt - h).norm() < 1e-9 * h.norm());
  for (Index i = 1; i < e.lambdas.size(); ++i) CHECK(e.lambdas(i - 1) >= e.lambdas(i));

  const auto shifted = hermitian_eig(h + 2.5 * CMatrix::Identity(4, 4));
  for (Index i = 0; i < 4; ++i) {
    CHECK(shifted.lambdas(i) == doctest::Approx(e.lambdas(i) + 2.5).epsilon(1e-12));
  }
}

TEST_CASE("logdet_pd against the eigenvalue-product oracle") {
  CHECK(logdet_pd(CMatrix::Identity(5, 5)) == doctest::Approx(0.0));

  CMatrix two = 2.0 * CMatrix::Identity(2, 2);
  CHECK(logdet_pd(two) == doctest::Approx(2.0));

  const CMatrix h = oracles::random_pd(3, 51);
  const auto eig = hermitian_eig(h);
  double expected = 0.0;
  for (Index i = 0; i < 3; ++i) expected += std::log2(eig.lambdas(i));
  CHECK(logdet_pd(h) == doctest::Approx(expected).epsilon(1e-10));

  CMatrix singular = CMatrix::Zero(2, 2);
  singular(0, 0) = 1.0;
  CHECK_THROWS_AS(logdet_pd(singular), std::domain_error);
  CMatrix negative = -CMatrix::Identity(2, 2);
  CHECK_THROWS_AS(logdet_pd(negative), std::domain_error);
}

TEST_CASE("numerical_rank") {
  CHECK(numerical_rank(CMatrix::Identity(3, 3)) == 3);
  CHECK(numerical_rank(CMatrix::Zero(3, 4)) == 0);
  const CMatrix u = oracles::random_cmatrix(4, 1, 61);
  const CMatrix v = oracles::random_cmatrix(3, 1, 62);
  CHECK(numerical_rank(u * v.adjoint()) == 1);
  CHECK_THROWS_AS(numerical_rank(CMatrix::Identity(2, 2), 2.0), std::domain_error);
}

TEST_CASE("project_trace_simplex worked examples") {
  RVector v(2);
  v << 0.5, 0.5;
  CHECK((project_trace_simplex(v, 1.0) - v).cwiseAbs().maxCoeff() < 1e-15);

  v << 2.0, 0.0;
  RVector expect(2);
  expect << 1.0, 0.0;
  CHECK((project_trace_simplex(v, 1.0) - expect).cwiseAbs().maxCoeff() < 1e-15);

  v << 1.0, 1.0;
  expect << 0.5, 0.5;
  CHECK((project_trace_simplex(v, 1.0) - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("project_trace_simplex invariants") {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> normal(0.0, 2.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    RVector v(5);
    for (Index i = 0; i < 5; ++i) v(i) = normal(gen);
    const double budget = std::abs(normal(gen)) + 0.1;
    const RVector p = project_trace_simplex(v, budget);
    CHECK(p.minCoeff() >= 0.0);
    CHECK(std::abs(p.sum() - budget) < 1e-12 * std::max(budget, 1.0));
    CHECK((project_trace_simplex(p, budget) - p).cwiseAbs().maxCoeff() < 1e-12);
    // no random feasible point comes closer in Euclidean distance
    for (int probe = 0; probe < 20; ++probe) {
      RVector q(5);
      double total = 0.0;
      for (Index i = 0; i < 5; ++i) {
        q(i) = -std::log(1.0 - unif(gen));
        total += q(i);
      }
      q *= budget / total;
      CHECK((v - p).squaredNorm() <= (v - q).squaredNorm() + 1e-9);
    }
  }
  CHECK(project_trace_simplex(RVector::Ones(3), 0.0).cwiseAbs().maxCoeff() == 0.0);
}
