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

#include "diffsim/dynamics.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "diffsim/errors.hpp"

namespace diffsim::dynamics {

namespace {

// Solves G y = rhs for the E x E constraint Gram matrix, failing loudly on
// degenerate geometry instead of regularizing.
Eigen::VectorXd solve_constraint_system(const Eigen::MatrixXd& g,
                                        const Eigen::VectorXd& rhs) {
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) {
    throw SingularConstraintSystem("constraint Gram matrix J_E M^-1 J_E^T is singular");
  }
  const double max_diag = g.diagonal().maxCoeff();
  Eigen::MatrixXd l = llt.matrixL();
  for (Eigen::Index j = 0; j < l.rows(); ++j) {
    if (!(l(j, j) * l(j, j) > 1e-12 * max_diag)) {
      throw SingularConstraintSystem("constraint Gram matrix is singular beyond tolerance");
    }
  }
  return llt.solve(rhs);
}

}  // namespace

Eigen::VectorXd point_masses(const SystemSpec& spec, const PhysParams& params) {
  Eigen::VectorXd pm = Eigen::VectorXd::Zero(spec.n_points());
  for (int b = 0; b < spec.n_bodies(); ++b) {
    const BodyDescriptor& body = spec.bodies[b];
    const double m = params.masses[b];
    switch (body.kind) {
      case BodyKind::kPointMass:
        pm[body.points[0]] += m;
        break;
      case BodyKind::kExtended2D: {
        const double tip = m * body.radius * body.radius / 4.0;
        pm[body.points[0]] += m - 2.0 * tip;
        pm[body.points[1]] += tip;
        pm[body.points[2]] += tip;
        break;
      }
      case BodyKind::kExtended3D: {
        const double tip = m * body.radius * body.radius / 4.0;
        const double axis_tip = m * body.thickness * body.thickness / 12.0;
        pm[body.points[0]] += m - 2.0 * tip - axis_tip;
        pm[body.points[1]] += tip;
        pm[body.points[2]] += tip;
        pm[body.points[3]] += axis_tip;
        break;
      }
    }
  }
  return pm;
}

// Per-coordinate inverse masses, the diagonal of M^-1.
static Eigen::VectorXd coordinate_inverse_masses(const SystemSpec& spec,
                                                 const PhysParams& params) {
  const Eigen::VectorXd pm = point_masses(spec, params);
  Eigen::VectorXd inv(spec.dim);
  for (int p = 0; p < spec.n_points(); ++p) {
    for (int a = 0; a < spec.ambient_dim; ++a) {
      inv[p * spec.ambient_dim + a] = 1.0 / pm[p];
    }
  }
  return inv;
}

Eigen::MatrixXd mass_matrix(const SystemSpec& spec, const PhysParams& params) {
  const Eigen::VectorXd pm = point_masses(spec, params);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(spec.dim, spec.dim);
  for (int p = 0; p < spec.n_points(); ++p) {
    for (int a = 0; a < spec.ambient_dim; ++a) {
      const int idx = p * spec.ambient_dim + a;
      m(idx, idx) = pm[p];
    }
  }
  return m;
}

std::pair<double, Eigen::VectorXd> potential_and_gradient(const SystemSpec& spec,
                                                          const PhysParams& params,
                                                          const Eigen::VectorXd& x) {
  double v = 0.0;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(spec.dim);
  const int adim = spec.ambient_dim;

  if (spec.potential.gravity) {
    const double g = params.potential_constants[spec.gravity_index()];
    const Eigen::VectorXd pm = point_masses(spec, params);
    const int up = adim - 1;
    for (int p = 0; p < spec.n_points(); ++p) {
      v += g * pm[p] * x[p * adim + up];
      grad[p * adim + up] += g * pm[p];
    }
  }

  if (!spec.potential.springs.empty()) {
    const double k = params.potential_constants[spec.stiffness_index()];
    for (const SpringTerm& s : spec.potential.springs) {
      const auto xi = x.segment(s.point_i * adim, adim);
      const auto xj = x.segment(s.point_j * adim, adim);
      const Eigen::VectorXd d = xi - xj;
      const double len = d.norm();
      const double stretch = len - s.rest_length;
      v += 0.5 * k * stretch * stretch;
      if (len > 1e-12) {
        const Eigen::VectorXd gij = (k * stretch / len) * d;
        grad.segment(s.point_i * adim, adim) += gij;
        grad.segment(s.point_j * adim, adim) -= gij;
      }
    }
  }
  return {v, grad};
}

Eigen::VectorXd equality_constraints(const SystemSpec& spec, const Eigen::VectorXd& x) {
  const int adim = spec.ambient_dim;
  Eigen::VectorXd phi(spec.n_constraints());
  for (int k = 0; k < spec.n_constraints(); ++k) {
    const EqualityConstraint& c = spec.equality_constraints[k];
    const auto xi = x.segment(c.point_i * adim, adim);
    const Eigen::VectorXd d =
        c.point_j >= 0 ? Eigen::VectorXd(xi - x.segment(c.point_j * adim, adim))
                       : Eigen::VectorXd(xi - c.anchor);
    phi[k] = d.squaredNorm() - c.length_sq;
  }
  return phi;
}

Eigen::MatrixXd equality_jacobian(const SystemSpec& spec, const Eigen::VectorXd& x) {
  const int adim = spec.ambient_dim;
  Eigen::MatrixXd je = Eigen::MatrixXd::Zero(spec.n_constraints(), spec.dim);
  for (int k = 0; k < spec.n_constraints(); ++k) {
    const EqualityConstraint& c = spec.equality_constraints[k];
    const auto xi = x.segment(c.point_i * adim, adim);
    const Eigen::VectorXd d =
        c.point_j >= 0 ? Eigen::VectorXd(xi - x.segment(c.point_j * adim, adim))
                       : Eigen::VectorXd(xi - c.anchor);
    je.row(k).segment(c.point_i * adim, adim) += 2.0 * d.transpose();
    if (c.point_j >= 0) {
      je.row(k).segment(c.point_j * adim, adim) -= 2.0 * d.transpose();
    }
  }
  return je;
}

// D_x(J_E v), an E x D matrix with the structure of J_E and velocities in
// place of positions.
static Eigen::MatrixXd equality_jacobian_rate(const SystemSpec& spec,
                                              const Eigen::VectorXd& v) {
  const int adim = spec.ambient_dim;
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(spec.n_constraints(), spec.dim);
  for (int c = 0; c < spec.n_constraints(); ++c) {
    const EqualityConstraint& ec = spec.equality_constraints[c];
    const auto vi = v.segment(ec.point_i * adim, adim);
    const Eigen::VectorXd dv =
        ec.point_j >= 0 ? Eigen::VectorXd(vi - v.segment(ec.point_j * adim, adim))
                        : Eigen::VectorXd(vi);
    k.row(c).segment(ec.point_i * adim, adim) += 2.0 * dv.transpose();
    if (ec.point_j >= 0) {
      k.row(c).segment(ec.point_j * adim, adim) -= 2.0 * dv.transpose();
    }
  }
  return k;
}

Eigen::VectorXd jacobian_rate_times_v(const SystemSpec& spec, const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& v) {
  (void)x;  // analytic form is position-independent for distance constraints
  const int adim = spec.ambient_dim;
  Eigen::VectorXd out(spec.n_constraints());
  for (int k = 0; k < spec.n_constraints(); ++k) {
    const EqualityConstraint& c = spec.equality_constraints[k];
    const auto vi = v.segment(c.point_i * adim, adim);
    const Eigen::VectorXd dv =
        c.point_j >= 0 ? Eigen::VectorXd(vi - v.segment(c.point_j * adim, adim))
                       : Eigen::VectorXd(vi);
    out[k] = 2.0 * dv.squaredNorm();
  }
  return out;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> lagrangian_field(const SystemSpec& spec,
                                                             const PhysParams& params,
                                                             const State& state) {
  const Eigen::VectorXd minv = coordinate_inverse_masses(spec, params);
  const Eigen::VectorXd grad_v = potential_and_gradient(spec, params, state.x).second;
  const Eigen::VectorXd minv_grad = minv.cwiseProduct(grad_v);

  if (spec.n_constraints() == 0) {
    return {state.v, -minv_grad};
  }

  const Eigen::MatrixXd je = equality_jacobian(spec, state.x);
  const Eigen::MatrixXd minv_jet = minv.asDiagonal() * je.transpose();
  const Eigen::MatrixXd gram = je * minv_jet;
  const Eigen::VectorXd rhs =
      je * minv_grad - jacobian_rate_times_v(spec, state.x, state.v);
  const Eigen::VectorXd y = solve_constraint_system(gram, rhs);
  return {state.v, minv_jet * y - minv_grad};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> hamiltonian_field(const SystemSpec& spec,
                                                              const PhysParams& params,
                                                              const State& state) {
  const Eigen::VectorXd minv = coordinate_inverse_masses(spec, params);
  const Eigen::VectorXd grad_v = potential_and_gradient(spec, params, state.x).second;

  // z = (x, p) with p = M v; grad H = (grad V, M^-1 p) and the symplectic
  // product gives the unconstrained flow u = (v, -grad V).
  const Eigen::VectorXd& vel = state.v;
  if (spec.n_constraints() == 0) {
    return {vel, -minv.cwiseProduct(grad_v)};
  }

  const Eigen::MatrixXd je = equality_jacobian(spec, state.x);
  const Eigen::MatrixXd rate = equality_jacobian_rate(spec, vel);
  const Eigen::MatrixXd minv_jet = minv.asDiagonal() * je.transpose();
  const Eigen::MatrixXd gram = je * minv_jet;

  // Psi = (Phi, Phidot) stacks E position rows and E velocity rows, and
  // W J W^T has the block form [[0, G], [-G, C]] with G the constraint Gram
  // matrix; the 2E x 2E system solves in two G-solves.
  const Eigen::MatrixXd cross = rate * minv_jet - je * (minv.asDiagonal() * rate.transpose());
  const Eigen::VectorXd r1 = je * vel;
  const Eigen::VectorXd r2 = rate * vel - je * minv.cwiseProduct(grad_v);

  const Eigen::VectorXd y2 = solve_constraint_system(gram, r1);
  const Eigen::VectorXd y1 = solve_constraint_system(gram, cross * y2 - r2);

  const Eigen::VectorXd xdot = vel - minv.cwiseProduct(je.transpose() * y2);
  const Eigen::VectorXd pdot = -grad_v + je.transpose() * y1 + rate.transpose() * y2;
  return {xdot, minv.cwiseProduct(pdot)};
}

State rk4_step(const FieldFn& field, const State& state, double dt) {
  State probe = state;

  const auto [k1x, k1v] = field(state);
  probe.x = state.x + 0.5 * dt * k1x;
  probe.v = state.v + 0.5 * dt * k1v;
  probe.t = state.t + 0.5 * dt;
  const auto [k2x, k2v] = field(probe);
  probe.x = state.x + 0.5 * dt * k2x;
  probe.v = state.v + 0.5 * dt * k2v;
  const auto [k3x, k3v] = field(probe);
  probe.x = state.x + dt * k3x;
  probe.v = state.v + dt * k3v;
  probe.t = state.t + dt;
  const auto [k4x, k4v] = field(probe);

  State out;
  out.x = state.x + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  out.v = state.v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  out.t = state.t + dt;
  return out;
}

double kinetic_energy(const SystemSpec& spec, const PhysParams& params,
                      const State& state) {
  const Eigen::VectorXd pm = point_masses(spec, params);
  const int adim = spec.ambient_dim;
  double ke = 0.0;
  for (int p = 0; p < spec.n_points(); ++p) {
    ke += 0.5 * pm[p] * state.v.segment(p * adim, adim).squaredNorm();
  }
  return ke;
}

double total_energy(const SystemSpec& spec, const PhysParams& params, const State& state) {
  return kinetic_energy(spec, params, state) +
         potential_and_gradient(spec, params, state.x).first;
}

}  // namespace diffsim::dynamics
