// Copyright 2026 The diffsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "diffsim/errors.hpp"
#include "diffsim/linalg.hpp"
#include "diffsim/rng.hpp"
#include "oracles.hpp"

using namespace diffsim;

TEST_CASE("cholesky of identity is identity") {
  const Eigen::MatrixXd l = cholesky_spd(Eigen::MatrixXd::Identity(3, 3));
  CHECK((l - Eigen::MatrixXd::Identity(3, 3)).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("cholesky of diagonal takes square roots") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 0) = 4.0;
  m(1, 1) = 9.0;
  const Eigen::MatrixXd l = cholesky_spd(m);
  CHECK(l(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(l(1, 1) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(l(0, 1) == 0.0);
  CHECK(l(1, 0) == 0.0);
}

TEST_CASE("cholesky reconstructs random SPD matrices") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd m = test_oracles::random_spd(5, rng);
    const Eigen::MatrixXd l = cholesky_spd(m);
    const double err = (l * l.transpose() - m).lpNorm<Eigen::Infinity>();
    CHECK(err <= 1e-10 * m.lpNorm<Eigen::Infinity>());
  }
}

TEST_CASE("cholesky rejects indefinite and near-singular input") {
  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(cholesky_spd(indefinite), NotPositiveDefinite);

  Eigen::MatrixXd tiny_pivot = Eigen::MatrixXd::Identity(2, 2);
  tiny_pivot(1, 1) = 1e-15;
  CHECK_THROWS_AS(cholesky_spd(tiny_pivot), NotPositiveDefinite);
}

TEST_CASE("solve_spd trivial cases") {
  Eigen::VectorXd b(3);
  b << 1.0, -2.0, 4.0;
  const Eigen::MatrixXd x = solve_spd(Eigen::MatrixXd::Identity(3, 3), b);
  CHECK((x - b).lpNorm<Eigen::Infinity>() == 0.0);

  Eigen::MatrixXd m(1, 1);
  m << 4.0;
  Eigen::VectorXd rhs(1);
  rhs << 8.0;
  CHECK(solve_spd(cholesky_spd(m), rhs)(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("solve_spd matches explicit inverse on a 4x4 system") {
  Rng rng(21);
  const Eigen::MatrixXd m = test_oracles::random_spd(4, rng);
  const Eigen::MatrixXd b = test_oracles::random_vector(4, rng);
  const Eigen::MatrixXd x = solve_spd(cholesky_spd(m), b);
  const Eigen::MatrixXd expected = m.inverse() * b;
  CHECK((x - expected).lpNorm<Eigen::Infinity>() <= 1e-9);
}

TEST_CASE("cholesky/solve round trip") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 6);
    const Eigen::MatrixXd m = test_oracles::random_spd(n, rng);
    const Eigen::VectorXd b = test_oracles::random_vector(n, rng);
    const Eigen::MatrixXd x = solve_spd(cholesky_spd(m), b);
    CHECK((m * x - b).lpNorm<Eigen::Infinity>() <= 1e-9 * b.lpNorm<Eigen::Infinity>());
  }
}

TEST_CASE("solve_spd rejects mismatched shapes") {
  CHECK_THROWS_AS(solve_spd(Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Ones(2, 1)),
                  ShapeMismatch);
}

TEST_CASE("max_eigenvalue brackets the top eigenvalue") {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2, 2);
  s(0, 0) = 1.0;
  s(1, 1) = 5.0;
  const double lambda = max_eigenvalue(s);
  CHECK(lambda >= 5.0);
  CHECK(lambda <= 5.05);

  CHECK(max_eigenvalue(Eigen::MatrixXd::Zero(4, 4)) == 0.0);
}

TEST_CASE("max_eigenvalue vs dense eigensolver oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd g(6, 3);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 3; ++j) g(i, j) = rng.normal();
    }
    const Eigen::MatrixXd s = g * g.transpose();  // PSD with nullspace
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
    const double truth = eig.eigenvalues().maxCoeff();
    const double lambda = max_eigenvalue(s);
    CHECK(lambda >= truth * (1.0 - 1e-9));
    CHECK(lambda <= 1.0101 * truth);
  }
}

TEST_CASE("max_eigenvalue handles a start vector in the nullspace direction") {
  Eigen::MatrixXd s(2, 2);
  s << 1.0, -1.0, -1.0, 1.0;
  const double lambda = max_eigenvalue(s);
  CHECK(lambda >= 2.0 * (1.0 - 1e-9));
  CHECK(lambda <= 2.021);
}

TEST_CASE("rng streams are reproducible") {
  Rng a(42), b(42), c(43);
  bool identical = true;
  for (int i = 0; i < 100; ++i) identical = identical && (a.uniform() == b.uniform());
  CHECK(identical);

  Rng a2(42);
  bool differs = false;
  for (int i = 0; i < 10; ++i) differs = differs || (a2.next_u64() != c.next_u64());
  CHECK(differs);
}

TEST_CASE("rng normal sampling has the right mean") {
  Rng rng(2024);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += rng.normal();
  CHECK(std::abs(sum / n) < 0.02);
}
