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

#include "diffsim/sim.hpp"

#include <sstream>

#include "diffsim/errors.hpp"
#include "diffsim/json_io.hpp"

namespace diffsim::sim {

Trajectory simulate(const SystemSpec& spec, const PhysParams& params, const State& state0,
                    const SimOptions& options) {
  const dynamics::VectorField field(spec, params, options.mode);
  const contact::ContactOptions contact_opts = options.contact_options();

  Trajectory traj;
  traj.states.reserve(options.n_steps + 1);
  traj.states.push_back(state0);
  traj.contact_flags.push_back(systems::detect_contacts(spec, state0.x).empty() ? 0 : 1);

  State current = state0;
  for (int step = 0; step < options.n_steps; ++step) {
    try {
      current = dynamics::rk4_step(
          [&field](const State& s) { return field(s); }, current, options.dt);
      const contact::ActiveContactSet contacts = systems::detect_contacts(spec, current.x);
      if (!contacts.empty()) {
        current = contact::contact_step(spec, params, current, contacts, contact_opts);
        traj.contact_flags.push_back(1);
      } else {
        traj.contact_flags.push_back(0);
      }
    } catch (const Error& err) {
      std::ostringstream msg;
      msg << "simulate: step " << step << ": " << err.what();
      throw SimulationError(msg.str(), step);
    }
    traj.states.push_back(current);
  }
  return traj;
}

Dataset generate_dataset(const systems::Preset& preset, const SimOptions& options,
                         int n_traj, int t_chunk, std::uint64_t seed) {
  Dataset out;
  out.preset = preset.name;
  out.spec_hash = json_io::spec_hash(preset.spec);
  out.seed = seed;
  out.t_chunk = t_chunk;
  out.options = options;
  out.chunks.reserve(n_traj);

  int n_with = 0;
  int n_without = 0;
  for (int i = 0; i < n_traj; ++i) {
    Rng rng(seed ^ static_cast<std::uint64_t>(i));
    const State state0 = systems::sample_initial_condition(preset.spec, preset.sampling, rng);
    const Trajectory traj = simulate(preset.spec, preset.truth, state0, options);

    // Candidate windows start collision-free; a window "has a collision" when
    // any later state in it does.
    std::vector<int> with_collision;
    std::vector<int> without_collision;
    const int last_start = static_cast<int>(traj.states.size()) - t_chunk;
    for (int s = 0; s <= last_start; ++s) {
      if (traj.contact_flags[s]) continue;
      bool any = false;
      for (int k = 1; k < t_chunk; ++k) any = any || traj.contact_flags[s + k];
      (any ? with_collision : without_collision).push_back(s);
    }
    if (with_collision.empty() && without_collision.empty()) {
      throw SamplingExhausted("generate_dataset: rollout has no collision-free window start");
    }

    const bool prefer_collision = n_with <= n_without;
    const std::vector<int>& pool =
        prefer_collision ? (with_collision.empty() ? without_collision : with_collision)
                         : (without_collision.empty() ? with_collision : without_collision);
    const int start = pool[static_cast<int>(rng.next_u64() % pool.size())];

    DatasetChunk chunk;
    chunk.t0 = traj.states[start].t;
    chunk.states.assign(traj.states.begin() + start, traj.states.begin() + start + t_chunk);
    for (int k = 1; k < t_chunk; ++k) {
      chunk.has_collision = chunk.has_collision || traj.contact_flags[start + k];
    }
    if (chunk.has_collision) {
      ++n_with;
    } else {
      ++n_without;
    }
    out.chunks.push_back(std::move(chunk));
  }
  return out;
}

}  // namespace diffsim::sim
