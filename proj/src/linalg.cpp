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

#include "diffsim/linalg.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "diffsim/errors.hpp"
#include "diffsim/rng.hpp"

namespace diffsim {

Eigen::MatrixXd cholesky_spd(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw ShapeMismatch("cholesky_spd: matrix must be square");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("cholesky_spd: factorization failed (indefinite matrix)");
  }
  Eigen::MatrixXd l = llt.matrixL();
  // Pivot j of the factorization is L(j,j)^2.
  const double max_diag = m.diagonal().maxCoeff();
  const double tol = 1e-12 * max_diag;
  for (Eigen::Index j = 0; j < l.rows(); ++j) {
    if (!(l(j, j) * l(j, j) > tol)) {
      throw NotPositiveDefinite("cholesky_spd: pivot below tolerance");
    }
  }
  return l;
}

Eigen::MatrixXd solve_spd(const Eigen::MatrixXd& l, const Eigen::MatrixXd& b) {
  if (l.rows() != l.cols() || l.rows() != b.rows()) {
    throw ShapeMismatch("solve_spd: incompatible shapes");
  }
  Eigen::MatrixXd x = l.triangularView<Eigen::Lower>().solve(b);
  l.transpose().triangularView<Eigen::Upper>().solveInPlace(x);
  return x;
}

double max_eigenvalue(const Eigen::MatrixXd& s) {
  const Eigen::Index n = s.rows();
  if (n == 0) return 0.0;
  const double scale = s.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;

  // Deterministic start vectors; retry with a fresh draw if one lands in the
  // null space.
  Rng rng(0x6d61786569676eULL);
  for (int attempt = 0; attempt < 4; ++attempt) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
    v.normalize();
    double lambda = 0.0;
    for (int iter = 0; iter < 10000; ++iter) {
      Eigen::VectorXd sv = s * v;
      const double norm = sv.norm();
      if (norm <= 1e-300 * scale) break;  // in the null space, retry
      v = sv / norm;
      const double next = v.dot(s * v);
      if (iter > 0 && std::abs(next - lambda) <= 1e-6 * std::abs(next)) {
        return 1.01 * next;
      }
      lambda = next;
    }
    if (lambda > 0.0) return 1.01 * lambda;
  }
  return 0.0;
}

}  // namespace diffsim
