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

#include "diffsim/contact.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "diffsim/dynamics.hpp"
#include "diffsim/errors.hpp"
#include "diffsim/linalg.hpp"

namespace diffsim::contact {

namespace {

Eigen::MatrixXd cholesky_or_singular(const Eigen::MatrixXd& m, const char* what) {
  try {
    return cholesky_spd(m);
  } catch (const NotPositiveDefinite&) {
    throw SingularConstraintSystem(what);
  }
}

ImpulseSolution run_solver(const socp::ConeQP& qp, const socp::SolveOptions& options) {
  return socp::solve(qp, options);
}

}  // namespace

Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& normal) {
  const int adim = static_cast<int>(normal.size());
  Eigen::MatrixXd tangents(adim - 1, adim);
  if (adim == 2) {
    tangents(0, 0) = normal[1];
    tangents(0, 1) = -normal[0];
    return tangents;
  }
  int axis = 0;
  for (int k = 1; k < 3; ++k) {
    if (std::abs(normal[k]) < std::abs(normal[axis])) axis = k;
  }
  Eigen::Vector3d e = Eigen::Vector3d::Zero();
  e[axis] = 1.0;
  const Eigen::Vector3d n = normal.head<3>();
  const Eigen::Vector3d t1 = (e - e.dot(n) * n).normalized();
  const Eigen::Vector3d t2 = n.cross(t1);
  tangents.row(0) = t1.transpose();
  tangents.row(1) = t2.transpose();
  return tangents;
}

Eigen::MatrixXd contact_rows(const SystemSpec& spec, const ActiveContact& contact) {
  const int adim = spec.ambient_dim;
  if (contact.dim == 1 && contact.limit_row.size() > 0) {
    return contact.limit_row;
  }
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(contact.dim, spec.dim);
  for (int axis = 0; axis < contact.dim; ++axis) {
    const Eigen::VectorXd direction =
        axis == 0 ? contact.normal : Eigen::VectorXd(contact.tangents.row(axis - 1));
    for (const auto& [point, weight] : contact.side_a) {
      rows.row(axis).segment(point * adim, adim) += weight * direction.transpose();
    }
    for (const auto& [point, weight] : contact.side_b) {
      rows.row(axis).segment(point * adim, adim) -= weight * direction.transpose();
    }
  }
  return rows;
}

Eigen::MatrixXd contact_jacobian(const SystemSpec& spec, const Eigen::VectorXd& x,
                                 const ActiveContactSet& contacts) {
  (void)x;  // geometry is baked into the per-contact descriptors at detection
  Eigen::MatrixXd j_c(contacts.total_dim(), spec.dim);
  int row = 0;
  for (const ActiveContact& contact : contacts.contacts) {
    j_c.middleRows(row, contact.dim) = contact_rows(spec, contact);
    row += contact.dim;
  }
  return j_c;
}

ContactInertia contact_inertia(const Eigen::MatrixXd& m, const Eigen::MatrixXd& j_e,
                               const Eigen::MatrixXd& j_c) {
  const Eigen::Index dim = m.rows();
  const Eigen::MatrixXd m_chol = cholesky_spd(m);
  const Eigen::MatrixXd m_inv =
      solve_spd(m_chol, Eigen::MatrixXd::Identity(dim, dim));
  // L with M^-1 = L L^T.
  const Eigen::MatrixXd l = cholesky_spd(0.5 * (m_inv + m_inv.transpose()));

  Eigen::MatrixXd lt_jct = l.transpose() * j_c.transpose();  // D x C
  ContactInertia out;
  if (j_e.rows() == 0) {
    out.a_factor = lt_jct;
    out.mhat_inv_jct = l * lt_jct;
    out.a = lt_jct.transpose() * lt_jct;
    return out;
  }

  const Eigen::MatrixXd lt_jet = l.transpose() * j_e.transpose();  // D x E
  const Eigen::MatrixXd gram = lt_jet.transpose() * lt_jet;        // J_E M^-1 J_E^T
  const Eigen::MatrixXd gram_chol =
      cholesky_or_singular(gram, "contact_inertia: singular J_E M^-1 J_E^T");
  // B = (I - P) L^T J_C^T with P = (L^T J_E^T) gram^-1 (J_E L).
  const Eigen::MatrixXd coeff = solve_spd(gram_chol, lt_jet.transpose() * lt_jct);
  out.a_factor = lt_jct - lt_jet * coeff;
  out.mhat_inv_jct = l * out.a_factor;
  out.a = out.a_factor.transpose() * out.a_factor;
  return out;
}

namespace {

// Assembles the cone description and the (possibly regularized) factor shared
// by both solve phases. With epsilon > 0 the C x C Cholesky factor of A + eI
// replaces the tall factor.
socp::ConeQP make_qp(const ContactInertia& inertia, const Eigen::VectorXd& linear,
                     const Eigen::VectorXd& mu, const std::vector<int>& dims,
                     const Eigen::VectorXd& lower_bounds, double epsilon) {
  socp::ConeQP qp;
  if (epsilon > 0.0) {
    Eigen::MatrixXd regularized = inertia.a;
    regularized.diagonal().array() += epsilon;
    qp.a_factor = cholesky_spd(regularized).transpose();
  } else {
    qp.a_factor = inertia.a_factor;
  }
  qp.linear = linear;
  qp.cones.resize(dims.size());
  for (size_t i = 0; i < dims.size(); ++i) {
    qp.cones[i].dim = dims[i];
    qp.cones[i].mu = dims[i] == 1 ? 0.0 : mu[static_cast<int>(i)];
    qp.cones[i].lower_bound = lower_bounds[static_cast<int>(i)];
  }
  return qp;
}

}  // namespace

ImpulseSolution solve_compression(const ContactInertia& inertia,
                                  const Eigen::VectorXd& v_c_minus,
                                  const Eigen::VectorXd& mu, const std::vector<int>& dims,
                                  double epsilon, const socp::SolveOptions& options) {
  const Eigen::VectorXd lb = Eigen::VectorXd::Zero(static_cast<int>(dims.size()));
  return run_solver(make_qp(inertia, v_c_minus, mu, dims, lb, epsilon), options);
}

ImpulseSolution solve_restitution(const ContactInertia& inertia,
                                  const Eigen::VectorXd& v_c_cplus,
                                  const Eigen::VectorXd& f_c, const Eigen::VectorXd& e_p,
                                  const Eigen::VectorXd& mu, const Eigen::VectorXd& v_c_star,
                                  const std::vector<int>& dims, double epsilon,
                                  const socp::SolveOptions& options) {
  Eigen::VectorXd lb(static_cast<int>(dims.size()));
  int offset = 0;
  for (size_t i = 0; i < dims.size(); ++i) {
    lb[static_cast<int>(i)] = std::max(0.0, e_p[static_cast<int>(i)] * f_c[offset]);
    offset += dims[i];
  }
  return run_solver(make_qp(inertia, v_c_cplus - v_c_star, mu, dims, lb, epsilon), options);
}

Eigen::VectorXd target_velocity(const SystemSpec& spec, const Eigen::VectorXd& x,
                                const Eigen::MatrixXd& j_e, const Eigen::MatrixXd& j_c,
                                const ActiveContactSet& contacts, double dt,
                                const std::vector<int>& k_steps) {
  (void)x;
  const int total = contacts.total_dim();
  Eigen::VectorXd desired = Eigen::VectorXd::Zero(total);
  int row = 0;
  for (int i = 0; i < contacts.size(); ++i) {
    desired[row] = contacts.contacts[i].penetration / (k_steps[i] * dt);
    row += contacts.contacts[i].dim;
  }
  if (j_e.rows() == 0 || desired.isZero(0.0)) return desired;

  const Eigen::Index c = j_c.rows();
  const Eigen::Index d = j_c.cols();
  // Pseudoinverse of J_C, shape-dependent.
  Eigen::MatrixXd pinv;
  if (c <= d) {
    const Eigen::MatrixXd gram = j_c * j_c.transpose();
    pinv = j_c.transpose() *
           solve_spd(cholesky_or_singular(gram, "target_velocity: singular J_C J_C^T"),
                     Eigen::MatrixXd::Identity(c, c));
  } else {
    const Eigen::MatrixXd gram = j_c.transpose() * j_c;
    pinv = solve_spd(cholesky_or_singular(gram, "target_velocity: singular J_C^T J_C"),
                     Eigen::MatrixXd::Identity(d, d)) *
           j_c.transpose();
  }

  const Eigen::VectorXd lifted = pinv * desired;
  const Eigen::MatrixXd je_gram = j_e * j_e.transpose();
  const Eigen::VectorXd correction =
      solve_spd(cholesky_or_singular(je_gram, "target_velocity: singular J_E J_E^T"),
                Eigen::VectorXd(j_e * lifted));
  const Eigen::VectorXd v_star = lifted - j_e.transpose() * correction;
  return j_c * v_star;
}

Eigen::VectorXd apply_impulses(const ContactInertia& inertia, const Eigen::VectorXd& v,
                               const Eigen::VectorXd& f_total) {
  return v + inertia.mhat_inv_jct * f_total;
}

State contact_step(const SystemSpec& spec, const PhysParams& params, const State& state,
                   const ActiveContactSet& contacts, const ContactOptions& options) {
  const int n = contacts.size();
  const Eigen::MatrixXd j_c = contact_jacobian(spec, state.x, contacts);
  const Eigen::MatrixXd j_e = dynamics::equality_jacobian(spec, state.x);
  const Eigen::MatrixXd m = dynamics::mass_matrix(spec, params);
  const ContactInertia inertia = contact_inertia(m, j_e, j_c);

  std::vector<int> dims(n);
  Eigen::VectorXd mu(n), e_p(n);
  std::vector<int> k_steps(n);
  for (int i = 0; i < n; ++i) {
    const ActiveContact& contact = contacts.contacts[i];
    dims[i] = contact.dim;
    mu[i] = contact.dim == 1 ? 0.0 : params.mu[contact.contact_class];
    e_p[i] = params.e_p[contact.contact_class];
    k_steps[i] = options.k_steps_override > 0 ? options.k_steps_override
                                              : (e_p[i] < 0.5 ? 4 : 1);
  }

  const Eigen::VectorXd v_c_minus = j_c * state.v;
  const ImpulseSolution compression =
      solve_compression(inertia, v_c_minus, mu, dims, options.epsilon, options.solver);
  if (!compression.converged) {
    throw SolverNotConverged("contact_step: compression solve did not converge",
                             compression.primal_residual);
  }

  const double dt = options.dt > 0.0 ? options.dt : spec.dt;
  const Eigen::VectorXd v_c_cplus = v_c_minus + inertia.a * compression.f;
  const Eigen::VectorXd v_c_star =
      target_velocity(spec, state.x, j_e, j_c, contacts, dt, k_steps);
  const ImpulseSolution restitution =
      solve_restitution(inertia, v_c_cplus, compression.f, e_p, mu, v_c_star, dims,
                        options.epsilon, options.solver);
  if (!restitution.converged) {
    throw SolverNotConverged("contact_step: restitution solve did not converge",
                             restitution.primal_residual);
  }

  State out = state;
  out.v = apply_impulses(inertia, state.v, compression.f + restitution.f);
  return out;
}

}  // namespace diffsim::contact
