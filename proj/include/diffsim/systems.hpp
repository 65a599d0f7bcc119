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

#ifndef DIFFSIM_SYSTEMS_HPP_
#define DIFFSIM_SYSTEMS_HPP_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "diffsim/contact.hpp"
#include "diffsim/rng.hpp"
#include "diffsim/types.hpp"

namespace diffsim::systems {

struct SamplingConfig {
  Eigen::VectorXd base_x;
  double pos_jitter = 0.1;      // uniform +/- per-body translation
  double orient_jitter = 1.0;   // fraction of a full rotation for extended bodies
  double point_jitter = 0.0;    // independent per-coordinate jitter (rope)
  double vel_sigma = 1.0;
  double max_speed = 1e9;       // per-point speed cap
  int max_rejections = 10000;
};

struct Preset {
  std::string name;
  SystemSpec spec;
  PhysParams truth;
  SamplingConfig sampling;
};

// Geometric collision detection over the spec's candidate list. Sphere pairs
// activate when center distance drops below the radius sum, sphere-plane when
// the center sits closer than one radius, stretch limits outside the
// [min_ratio, max_ratio] band, bend limits past max_angle.
contact::ActiveContactSet detect_contacts(const SystemSpec& spec, const Eigen::VectorXd& x);

// Newton projection of x onto the constraint manifold Phi = 0. Returns false
// if the iteration fails to reach tol.
bool project_to_manifold(const SystemSpec& spec, Eigen::VectorXd& x, double tol = 1e-12,
                         int max_iter = 50);

// Orthogonal projection of v onto the null space of J_E(x).
void project_to_tangent(const SystemSpec& spec, const Eigen::VectorXd& x, Eigen::VectorXd& v);

// Rejection-samples a collision-free, constraint-satisfying state with
// velocities in the constraint tangent space.
State sample_initial_condition(const SystemSpec& spec, const SamplingConfig& sampling,
                               Rng& rng);

// Presets are JSON documents in a presets/ directory, keyed by task name
// (BP5-e, BP5, CP3-e, CP3, BD5, Rope, Gyro-e, Gyro).
Preset load_preset(const std::string& name, const std::string& presets_dir);
Preset preset_from_json_text(const std::string& text);
std::vector<std::string> list_presets(const std::string& presets_dir);

// System builders used by the preset loader and the planning tasks.
SystemSpec build_bouncing_points(const std::vector<double>& radii,
                                 const Eigen::Vector4d& box, int pair_class,
                                 int wall_class, double dt, bool gravity = false);
SystemSpec build_bouncing_disks(const std::vector<double>& radii, const Eigen::Vector4d& box,
                                int pair_class, int wall_class, double dt);
SystemSpec build_chain_pendulum(const std::vector<double>& lengths,
                                const Eigen::Vector2d& anchor, double bob_radius,
                                double ground_y, double dt);
SystemSpec build_gyroscope(double radius, double height, double arm, double wall_x,
                           double dt);
SystemSpec build_rope(int n_points, double spacing, double min_ratio, double max_ratio,
                      double max_angle, double dt);
// Single 2D disk above a ground plane (throwing tasks).
SystemSpec build_thrown_disk(double radius, double ground_y, double dt);

}  // namespace diffsim::systems

#endif  // DIFFSIM_SYSTEMS_HPP_
