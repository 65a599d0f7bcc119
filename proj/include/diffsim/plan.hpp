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

#ifndef DIFFSIM_PLAN_HPP_
#define DIFFSIM_PLAN_HPP_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "diffsim/sim.hpp"
#include "diffsim/types.hpp"

namespace diffsim::plan {

enum class TaskKind { kBilliards, kThrowHit, kThrowVertical };

// Gradient-based trajectory planning task on a fixed simulator.
//   billiards:      decision = cue ball initial position and velocity; squared
//                   distance between the struck ball and the target at the
//                   final step.
//   throw_hit:      decision = disk initial velocity; squared distance of the
//                   c.o.m. to the target at the final step (one ground bounce
//                   on the optimal path).
//   throw_vertical: decision = initial spin; mean squared horizontal deviation
//                   of the c.o.m. from a vertical line over the second half of
//                   the horizon.
struct PlanTask {
  TaskKind kind = TaskKind::kBilliards;
  SystemSpec spec;
  PhysParams params;
  State base_state;
  sim::SimOptions sim;
  int horizon = 256;
  Eigen::VectorXd target;      // billiards / throw_hit
  double line_x = 0.0;         // throw_vertical
  int objective_body = 0;
};

PlanTask make_task(TaskKind kind);
TaskKind task_kind_from_name(const std::string& name);

Eigen::VectorXd default_decision(const PlanTask& task);

// Writes the decision variables into the task's base state (positions,
// velocities, or rigid angular velocity for extended bodies).
State decision_to_state(const PlanTask& task, const Eigen::VectorXd& decision);

double plan_objective(const PlanTask& task, const Eigen::VectorXd& decision);

struct PlanResult {
  Eigen::VectorXd best_decision;
  double best_loss = 0.0;
  std::vector<double> losses;       // raw loss per iteration
  std::vector<double> best_losses;  // best-so-far, non-increasing
};

// Adam over the decision variables with finite-difference gradients.
PlanResult plan(const PlanTask& task, const Eigen::VectorXd& init_decision, int iters,
                double lr = 1e-2, int threads = 1);

}  // namespace diffsim::plan

#endif  // DIFFSIM_PLAN_HPP_
