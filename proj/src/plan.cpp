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

#include "diffsim/plan.hpp"

#include <cmath>

#include "diffsim/errors.hpp"
#include "diffsim/learn.hpp"
#include "diffsim/systems.hpp"

namespace diffsim::plan {

namespace {

Eigen::Vector2d body_com(const SystemSpec& spec, const State& state, int body) {
  const int point = spec.bodies[body].points[0];
  return state.x.segment(point * spec.ambient_dim, 2);
}

}  // namespace

TaskKind task_kind_from_name(const std::string& name) {
  if (name == "billiards") return TaskKind::kBilliards;
  if (name == "throw_hit") return TaskKind::kThrowHit;
  if (name == "throw_vertical") return TaskKind::kThrowVertical;
  throw ConfigError("unknown plan task: " + name +
                    " (expected billiards, throw_hit or throw_vertical)");
}

PlanTask make_task(TaskKind kind) {
  PlanTask task;
  task.kind = kind;
  task.sim.dt = 0.01;
  task.sim.solver_tol = 1e-10;

  switch (kind) {
    case TaskKind::kBilliards: {
      // Cue ball (body 0) strikes the object ball (body 1); the table box is
      // far away so only the ball pair can collide.
      task.spec = systems::build_bouncing_points(
          {0.05, 0.05}, Eigen::Vector4d(-100.0, -100.0, 100.0, 100.0), 0, 1, 0.01, false);
      task.params.masses = Eigen::Vector2d(1.0, 1.0);
      task.params.mu = Eigen::Vector2d(0.0, 0.0);
      task.params.e_p = Eigen::Vector2d(1.0, 1.0);
      task.params.potential_constants = Eigen::VectorXd(0);
      task.base_state.x = Eigen::VectorXd(4);
      task.base_state.x << 0.1, 0.45, 0.55, 0.5;
      task.base_state.v = Eigen::VectorXd::Zero(4);
      task.horizon = 256;
      task.target = Eigen::Vector2d(0.9, 0.72);
      task.objective_body = 1;
      break;
    }
    case TaskKind::kThrowHit: {
      task.spec = systems::build_thrown_disk(0.25, 0.0, 0.01);
      task.params.masses = Eigen::VectorXd::Constant(1, 1.0);
      task.params.mu = Eigen::VectorXd::Constant(1, 0.3);
      task.params.e_p = Eigen::VectorXd::Constant(1, 0.6);
      task.params.potential_constants = Eigen::VectorXd::Constant(1, 9.8);
      task.base_state.x = Eigen::VectorXd(6);
      task.base_state.x << 0.0, 1.0, 1.0, 1.0, 0.0, 2.0;
      task.base_state.v = Eigen::VectorXd::Zero(6);
      task.horizon = 200;
      task.target = Eigen::Vector2d(2.2, 0.9);
      task.objective_body = 0;
      break;
    }
    case TaskKind::kThrowVertical: {
      task.spec = systems::build_thrown_disk(0.25, 0.0, 0.01);
      task.params.masses = Eigen::VectorXd::Constant(1, 1.0);
      task.params.mu = Eigen::VectorXd::Constant(1, 0.8);
      task.params.e_p = Eigen::VectorXd::Constant(1, 0.5);
      task.params.potential_constants = Eigen::VectorXd::Constant(1, 9.8);
      task.base_state.x = Eigen::VectorXd(6);
      task.base_state.x << 0.0, 1.5, 1.0, 1.5, 0.0, 2.5;
      task.base_state.v = Eigen::VectorXd(6);
      // Fixed translational velocity on all three points; spin is the
      // decision variable.
      task.base_state.v << 1.2, 0.0, 1.2, 0.0, 1.2, 0.0;
      task.horizon = 256;
      // Vertical reference line through the first-touch point of the
      // spin-free flight.
      const double drop = 1.5 - 0.25;
      const double t_touch = std::sqrt(2.0 * drop / 9.8);
      task.line_x = 1.2 * t_touch;
      task.objective_body = 0;
      break;
    }
  }
  task.sim.n_steps = task.horizon;
  return task;
}

Eigen::VectorXd default_decision(const PlanTask& task) {
  switch (task.kind) {
    case TaskKind::kBilliards: {
      Eigen::VectorXd d(4);
      d << 0.1, 0.45, 0.9, 0.12;
      return d;
    }
    case TaskKind::kThrowHit: {
      Eigen::VectorXd d(2);
      d << 1.5, 1.0;
      return d;
    }
    case TaskKind::kThrowVertical:
      return Eigen::VectorXd::Zero(1);
  }
  return {};
}

State decision_to_state(const PlanTask& task, const Eigen::VectorXd& decision) {
  State state = task.base_state;
  switch (task.kind) {
    case TaskKind::kBilliards:
      state.x.segment(0, 2) = decision.segment(0, 2);
      state.v.segment(0, 2) = decision.segment(2, 2);
      break;
    case TaskKind::kThrowHit:
      for (int p = 0; p < 3; ++p) state.v.segment(2 * p, 2) = decision.segment(0, 2);
      break;
    case TaskKind::kThrowVertical: {
      const double omega = decision[0];
      const Eigen::Vector2d com = state.x.segment(0, 2);
      for (int p = 1; p < 3; ++p) {
        const Eigen::Vector2d offset = state.x.segment(2 * p, 2) - com;
        const Eigen::Vector2d spin(-offset[1] * omega, offset[0] * omega);
        state.v.segment(2 * p, 2) += spin;
      }
      break;
    }
  }
  return state;
}

double plan_objective(const PlanTask& task, const Eigen::VectorXd& decision) {
  const State state0 = decision_to_state(task, decision);
  Trajectory traj;
  try {
    traj = sim::simulate(task.spec, task.params, state0, task.sim);
  } catch (const Error&) {
    return 1e6;
  }

  switch (task.kind) {
    case TaskKind::kBilliards:
    case TaskKind::kThrowHit: {
      const Eigen::Vector2d final_com =
          body_com(task.spec, traj.states.back(), task.objective_body);
      return (final_com - task.target).squaredNorm();
    }
    case TaskKind::kThrowVertical: {
      const int half = task.horizon / 2;
      double sum = 0.0;
      int count = 0;
      for (int k = half; k <= task.horizon; ++k) {
        const double dx = body_com(task.spec, traj.states[k], 0)[0] - task.line_x;
        sum += dx * dx;
        ++count;
      }
      return sum / count;
    }
  }
  return 0.0;
}

PlanResult plan(const PlanTask& task, const Eigen::VectorXd& init_decision, int iters,
                double lr, int threads) {
  Eigen::VectorXd decision = init_decision;
  learn::AdamW optimizer;
  optimizer.lr = lr;

  PlanResult result;
  result.best_decision = decision;
  result.best_loss = plan_objective(task, decision);
  result.losses.push_back(result.best_loss);
  result.best_losses.push_back(result.best_loss);

  const learn::LossFn objective = [&](const Eigen::VectorXd& d) {
    return plan_objective(task, d);
  };

  for (int iter = 0; iter < iters; ++iter) {
    const Eigen::VectorXd grad = learn::fd_gradient(decision, objective, threads);
    optimizer.step(decision, grad);
    const double loss = plan_objective(task, decision);
    result.losses.push_back(loss);
    if (loss < result.best_loss) {
      result.best_loss = loss;
      result.best_decision = decision;
    }
    result.best_losses.push_back(result.best_loss);
  }
  return result;
}

}  // namespace diffsim::plan
