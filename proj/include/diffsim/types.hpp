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

#ifndef DIFFSIM_TYPES_HPP_
#define DIFFSIM_TYPES_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace diffsim {

// Positions/velocities of all coordinate points at one instant. Coordinates
// are stacked per point: x = (p0, p1, ...), each point carrying ambient_dim
// entries.
struct State {
  Eigen::VectorXd x;
  Eigen::VectorXd v;
  double t = 0.0;
};

enum class BodyKind { kPointMass, kExtended2D, kExtended3D };

// A body is one point (point mass) or a center-of-mass point plus unit axis
// tip points (extended body): 3 points in 2D, 4 in 3D. Tip points are
// coordinate carriers for orientation; `radius` is the collision radius and,
// together with `thickness` for 3D bodies, fixes the per-point masses that
// reproduce the body's total mass and principal moments of inertia.
struct BodyDescriptor {
  BodyKind kind = BodyKind::kPointMass;
  std::vector<int> points;  // 1, 3 or 4 point indices; points[0] is the c.o.m.
  double radius = 0.0;
  double thickness = 0.0;  // 3D bodies only (cylinder height)
};

// Distance-squared equality constraint between two points, or between a point
// and a fixed anchor when point_j < 0.
struct EqualityConstraint {
  int point_i = 0;
  int point_j = -1;
  Eigen::VectorXd anchor;  // used when point_j < 0
  double length_sq = 1.0;
};

enum class CandidateKind { kSpherePair, kSpherePlane, kStretchLimit, kBendLimit };

struct ContactCandidate {
  CandidateKind kind = CandidateKind::kSpherePair;
  int contact_class = 0;

  // kSpherePair: body_a vs body_b.  kSpherePlane: body_a vs the plane.
  int body_a = -1;
  int body_b = -1;
  Eigen::VectorXd plane_point;
  Eigen::VectorXd plane_normal;  // unit, pointing toward the allowed side

  // kStretchLimit: segment point_i--point_j with rest length and ratio band.
  // kBendLimit: angle at point_j between segments (i,j) and (j,k).
  int point_i = -1;
  int point_j = -1;
  int point_k = -1;
  double rest_length = 0.0;
  double min_ratio = 0.8;
  double max_ratio = 1.2;
  double max_angle = 0.2;  // rad
};

struct SpringTerm {
  int point_i = 0;
  int point_j = 0;
  double rest_length = 1.0;
};

// Analytic potential family: optional uniform gravity acting on every point
// mass along the last ambient axis, plus optional elastic springs sharing one
// stiffness constant. potential_constants layout: [g] and/or [k], gravity
// first when both are present.
struct PotentialSpec {
  bool gravity = false;
  std::vector<SpringTerm> springs;
};

struct SystemSpec {
  int dim = 0;          // D
  int ambient_dim = 2;  // 2 or 3
  std::vector<BodyDescriptor> bodies;
  std::vector<EqualityConstraint> equality_constraints;
  std::vector<ContactCandidate> contact_candidates;
  PotentialSpec potential;
  double dt = 0.01;

  int n_points() const { return dim / ambient_dim; }
  int n_constraints() const { return static_cast<int>(equality_constraints.size()); }
  int n_bodies() const { return static_cast<int>(bodies.size()); }
  int n_contact_classes() const {
    int m = 0;
    for (const auto& c : contact_candidates) m = std::max(m, c.contact_class + 1);
    return m;
  }
  int n_potential_constants() const {
    return (potential.gravity ? 1 : 0) + (potential.springs.empty() ? 0 : 1);
  }
  int gravity_index() const { return potential.gravity ? 0 : -1; }
  int stiffness_index() const {
    return potential.springs.empty() ? -1 : (potential.gravity ? 1 : 0);
  }
};

// Physical parameters of a system. `masses` holds one total mass per body;
// `mu` and `e_p` are indexed by contact class.
struct PhysParams {
  Eigen::VectorXd masses;
  Eigen::VectorXd mu;
  Eigen::VectorXd e_p;
  Eigen::VectorXd potential_constants;
};

struct TrajectoryMeta {
  std::uint64_t seed = 0;
  std::string spec_hash;
};

struct Trajectory {
  std::vector<State> states;
  // Per recorded state: were any contacts active at that state.
  std::vector<std::uint8_t> contact_flags;
  TrajectoryMeta meta;
};

}  // namespace diffsim

#endif  // DIFFSIM_TYPES_HPP_
