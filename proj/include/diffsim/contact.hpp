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

#ifndef DIFFSIM_CONTACT_HPP_
#define DIFFSIM_CONTACT_HPP_

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "diffsim/socp.hpp"
#include "diffsim/types.hpp"

namespace diffsim::contact {

using socp::ImpulseSolution;

// One active contact. Frictional contacts span ambient_dim rows (normal first,
// then tangents); limit constraints are one-dimensional with the gradient of
// the limited quantity as their single row. Row assembly data: each side
// holds (point, weight) pairs so extended-body contact points distribute over
// the body's coordinate points.
struct ActiveContact {
  int candidate_index = -1;
  int contact_class = 0;
  int dim = 2;
  double penetration = 0.0;  // m, or rad for bend limits

  Eigen::VectorXd normal;    // unit, frictional contacts only
  Eigen::MatrixXd tangents;  // (dim-1) x ambient_dim, frictional contacts only
  std::vector<std::pair<int, double>> side_a;
  std::vector<std::pair<int, double>> side_b;
  Eigen::MatrixXd limit_row;  // 1 x D, limit constraints only

  Eigen::MatrixXd jacobian_rows;  // dim x D
};

struct ActiveContactSet {
  std::vector<ActiveContact> contacts;

  bool empty() const { return contacts.empty(); }
  int size() const { return static_cast<int>(contacts.size()); }
  int total_dim() const {
    int c = 0;
    for (const auto& contact : contacts) c += contact.dim;
    return c;
  }
};

// Orthonormal tangent frame completing a unit normal: the 90-degree rotation
// in 2D; in 3D Gram-Schmidt against the coordinate axis with the smallest
// normal component, ties preferring the x-axis.
Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& normal);

// dim x D Jacobian rows of one contact at configuration x.
Eigen::MatrixXd contact_rows(const SystemSpec& spec, const ActiveContact& contact);

// Stacked C x D contact Jacobian. Sign convention: positive normal component
// of J_C v means separating.
Eigen::MatrixXd contact_jacobian(const SystemSpec& spec, const Eigen::VectorXd& x,
                                 const ActiveContactSet& contacts);

// Contact-space inverse inertia A = J_C Mhat^-1 J_C^T with the equality
// constraints folded in, plus the factor B with B^T B = A and Mhat^-1 J_C^T
// for applying impulses. B = (I - P) L^T J_C^T with M^-1 = L L^T and P the
// orthogonal projector onto range(L^T J_E^T); no eigendecomposition needed.
struct ContactInertia {
  Eigen::MatrixXd a;              // C x C, PSD
  Eigen::MatrixXd a_factor;       // D x C
  Eigen::MatrixXd mhat_inv_jct;   // D x C
};

ContactInertia contact_inertia(const Eigen::MatrixXd& m, const Eigen::MatrixXd& j_e,
                               const Eigen::MatrixXd& j_c);

struct ContactOptions {
  double epsilon = 0.0;      // ridge added to A (0 = exact model)
  int k_steps_override = 0;  // 0 = per-class rule: 4 when e_p < 0.5, else 1
  double dt = 0.0;           // integrator step for penetration fixing; 0 = spec.dt
  socp::SolveOptions solver;
};

// Compression impulses: maximum dissipation over the product of friction
// cones.
ImpulseSolution solve_compression(const ContactInertia& inertia,
                                  const Eigen::VectorXd& v_c_minus,
                                  const Eigen::VectorXd& mu, const std::vector<int>& dims,
                                  double epsilon, const socp::SolveOptions& options = {});

// Restitution impulses with the per-contact normal lower bound e_p * f_n^c and
// the penetration-compensation target v_c_star.
ImpulseSolution solve_restitution(const ContactInertia& inertia,
                                  const Eigen::VectorXd& v_c_cplus,
                                  const Eigen::VectorXd& f_c, const Eigen::VectorXd& e_p,
                                  const Eigen::VectorXd& mu, const Eigen::VectorXd& v_c_star,
                                  const std::vector<int>& dims, double epsilon,
                                  const socp::SolveOptions& options = {});

// Contact-space target velocity for penetration fixing: desired normal rate
// penetration/(k dt) corrected so the implied Cartesian velocity respects the
// equality constraints.
Eigen::VectorXd target_velocity(const SystemSpec& spec, const Eigen::VectorXd& x,
                                const Eigen::MatrixXd& j_e, const Eigen::MatrixXd& j_c,
                                const ActiveContactSet& contacts, double dt,
                                const std::vector<int>& k_steps);

// v+ = v + Mhat^-1 J_C^T f; the equality-constraint impulse never materializes
// because it is absorbed into Mhat^-1.
Eigen::VectorXd apply_impulses(const ContactInertia& inertia, const Eigen::VectorXd& v,
                               const Eigen::VectorXd& f_total);

// Full contact resolution at one instant: compression solve, penetration
// target, restitution solve, impulse application. Returns the state with
// updated velocities (x unchanged).
State contact_step(const SystemSpec& spec, const PhysParams& params, const State& state,
                   const ActiveContactSet& contacts, const ContactOptions& options = {});

}  // namespace diffsim::contact

#endif  // DIFFSIM_CONTACT_HPP_
