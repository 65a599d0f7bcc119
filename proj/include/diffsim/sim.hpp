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

#ifndef DIFFSIM_SIM_HPP_
#define DIFFSIM_SIM_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "diffsim/contact.hpp"
#include "diffsim/dynamics.hpp"
#include "diffsim/systems.hpp"
#include "diffsim/types.hpp"

namespace diffsim::sim {

struct SimOptions {
  double dt = 0.01;
  int n_steps = 100;
  dynamics::DynamicsMode mode = dynamics::DynamicsMode::kLagrangian;
  double epsilon = 0.0;  // contact model ridge: 0 selects CM, > 0 CMr
  int k_steps = 0;       // penetration fixing steps; 0 = per-class default
  double solver_tol = 1e-10;
  int solver_max_iter = 50000;

  contact::ContactOptions contact_options() const {
    contact::ContactOptions opts;
    opts.epsilon = epsilon;
    opts.k_steps_override = k_steps;
    opts.dt = dt;
    opts.solver.tol = solver_tol;
    opts.solver.max_iter = solver_max_iter;
    return opts;
  }
};

// Interleaves RK4 integration with impulse-based contact resolution: after
// each smooth step, active contacts overwrite the velocity.
Trajectory simulate(const SystemSpec& spec, const PhysParams& params, const State& state0,
                    const SimOptions& options);

struct DatasetChunk {
  double t0 = 0.0;
  bool has_collision = false;
  std::vector<State> states;
};

struct Dataset {
  std::string preset;
  std::string spec_hash;
  std::uint64_t seed = 0;
  int t_chunk = 5;
  SimOptions options;
  std::vector<DatasetChunk> chunks;
};

// Rolls out n_traj trajectories of options.n_steps steps from sampled
// collision-free initial conditions and cuts one t_chunk-state window from
// each, steering the windows so colliding and collision-free chunks stay
// balanced. Deterministic under (seed, preset).
Dataset generate_dataset(const systems::Preset& preset, const SimOptions& options,
                         int n_traj, int t_chunk, std::uint64_t seed);

}  // namespace diffsim::sim

#endif  // DIFFSIM_SIM_HPP_
