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

#ifndef DIFFSIM_LINALG_HPP_
#define DIFFSIM_LINALG_HPP_

#include <Eigen/Core>

namespace diffsim {

// Cholesky factor L (lower triangular) with M = L*L^T. Throws
// NotPositiveDefinite when any pivot falls at or below 1e-12 times the largest
// diagonal entry of M.
Eigen::MatrixXd cholesky_spd(const Eigen::MatrixXd& m);

// Solves (L*L^T) X = B for a factor produced by cholesky_spd.
Eigen::MatrixXd solve_spd(const Eigen::MatrixXd& l, const Eigen::MatrixXd& b);

// Upper estimate of the largest eigenvalue of a symmetric PSD matrix: power
// iteration to relative tolerance 1e-6 (capped at 10000 iterations), inflated
// by 1%. Returns 0 for an all-zero matrix.
double max_eigenvalue(const Eigen::MatrixXd& s);

}  // namespace diffsim

#endif  // DIFFSIM_LINALG_HPP_
