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

#ifndef DIFFSIM_SOCP_HPP_
#define DIFFSIM_SOCP_HPP_

#include <vector>

#include <Eigen/Core>

namespace diffsim::socp {

// One contact block of the feasible set
//   K = { f in R^dim : f_n >= lower_bound, mu * f_n >= |f_t| },
// with f_n the leading component. dim 1 blocks are pure bound constraints.
struct ConeSpec {
  int dim = 2;
  double mu = 0.0;
  double lower_bound = 0.0;
};

// minimize 0.5 |A_factor f|^2 + linear . f  over the product of cones.
// A_factor is any matrix B with B^T B equal to the quadratic form (the
// contact-space inverse inertia, possibly ridge-regularized).
struct ConeQP {
  Eigen::MatrixXd a_factor;
  Eigen::VectorXd linear;
  std::vector<ConeSpec> cones;

  int size() const { return static_cast<int>(linear.size()); }
};

// Euclidean projection onto one cone block: closed-form second-order-cone
// projection, composed with the half-space bound via Dykstra's alternating
// projections when both are needed.
Eigen::VectorXd project_cone(const Eigen::VectorXd& y, double mu, double lower_bound);

// Projects each cone block of y in place.
void project_product_cone(const ConeQP& qp, Eigen::VectorXd& y);

struct ImpulseSolution {
  Eigen::VectorXd f;
  int iterations = 0;
  double primal_residual = 0.0;
  bool converged = false;
};

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 50000;
};

// Accelerated projected gradient (FISTA with adaptive restart), step 1/lambda
// with lambda an upper eigenvalue estimate of the quadratic term. Fixed
// initialization at f = 0 unless a warm start is supplied; returns the best
// iterate by objective with its fixed-point residual.
ImpulseSolution solve(const ConeQP& qp, const SolveOptions& options = {},
                      const Eigen::VectorXd* warm_start = nullptr);

enum class SensitivityInput { kLinear, kMu, kLowerBound };

// d f* / d input by central finite differences with re-solves warm-started at
// the solution. Column j perturbs input component j. Works on any converged
// solution.
Eigen::MatrixXd sensitivity(const ConeQP& qp, const ImpulseSolution& solution,
                            SensitivityInput wrt, const SolveOptions& options = {});

// Fast path: solves the linearized KKT system on the active set. Only valid
// at strictly complementary solutions; throws DegenerateActiveSet otherwise.
Eigen::MatrixXd sensitivity_kkt(const ConeQP& qp, const ImpulseSolution& solution,
                                SensitivityInput wrt);

}  // namespace diffsim::socp

#endif  // DIFFSIM_SOCP_HPP_
