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

#ifndef DIFFSIM_DYNAMICS_HPP_
#define DIFFSIM_DYNAMICS_HPP_

#include <functional>
#include <utility>

#include <Eigen/Core>

#include "diffsim/types.hpp"

namespace diffsim::dynamics {

// One mass per coordinate point. Point-mass bodies carry their full mass on
// their single point. Extended bodies distribute mass so the point system
// reproduces the body's total mass and principal moments of inertia: a 2D disk
// of mass m and radius r puts m*r^2/4 on each unit-offset axis tip, a 3D
// cylinder (radius r, height h) puts m*r^2/4 on the two transverse tips and
// m*h^2/12 on the symmetry-axis tip, with the remainder on the c.o.m. point.
Eigen::VectorXd point_masses(const SystemSpec& spec, const PhysParams& params);

// D x D block-diagonal (in fact diagonal) mass matrix, constant in x.
Eigen::MatrixXd mass_matrix(const SystemSpec& spec, const PhysParams& params);

// Potential energy and its analytic gradient. Gravity acts along the last
// ambient axis on every point mass; rope segments add 0.5*k*(|xi-xj|-l0)^2.
std::pair<double, Eigen::VectorXd> potential_and_gradient(
    const SystemSpec& spec, const PhysParams& params, const Eigen::VectorXd& x);

// Distance-squared residuals Phi_k = |xi-xj|^2 - l_k^2 (anchors use a fixed
// point in place of xj).
Eigen::VectorXd equality_constraints(const SystemSpec& spec, const Eigen::VectorXd& x);

// E x D Jacobian of the residual vector: row k carries 2(xi-xj)^T at block i
// and -2(xi-xj)^T at block j.
Eigen::MatrixXd equality_jacobian(const SystemSpec& spec, const Eigen::VectorXd& x);

// (D_x(J_E v)) v; entry k is 2|vi-vj|^2 for a distance constraint.
Eigen::VectorXd jacobian_rate_times_v(const SystemSpec& spec, const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& v);

// Constrained equations of motion, returned as (xdot, vdot).
std::pair<Eigen::VectorXd, Eigen::VectorXd> lagrangian_field(const SystemSpec& spec,
                                                             const PhysParams& params,
                                                             const State& state);

// Same contract as lagrangian_field, derived through the constrained
// Hamiltonian form in z = (x, M v).
std::pair<Eigen::VectorXd, Eigen::VectorXd> hamiltonian_field(const SystemSpec& spec,
                                                              const PhysParams& params,
                                                              const State& state);

enum class DynamicsMode { kLagrangian, kHamiltonian };

class VectorField {
 public:
  VectorField(const SystemSpec& spec, const PhysParams& params,
              DynamicsMode mode = DynamicsMode::kLagrangian)
      : spec_(&spec), params_(&params), mode_(mode) {}

  std::pair<Eigen::VectorXd, Eigen::VectorXd> operator()(const State& state) const {
    return mode_ == DynamicsMode::kLagrangian ? lagrangian_field(*spec_, *params_, state)
                                              : hamiltonian_field(*spec_, *params_, state);
  }

  DynamicsMode mode() const { return mode_; }

 private:
  const SystemSpec* spec_;
  const PhysParams* params_;
  DynamicsMode mode_;
};

using FieldFn = std::function<std::pair<Eigen::VectorXd, Eigen::VectorXd>(const State&)>;

// Classical 4-stage Runge-Kutta update of (x, v); t advances by dt.
State rk4_step(const FieldFn& field, const State& state, double dt);

// 0.5 v^T M v + V(x).
double total_energy(const SystemSpec& spec, const PhysParams& params, const State& state);

double kinetic_energy(const SystemSpec& spec, const PhysParams& params, const State& state);

}  // namespace diffsim::dynamics

#endif  // DIFFSIM_DYNAMICS_HPP_
