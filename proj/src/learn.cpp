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

#include "diffsim/learn.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "diffsim/errors.hpp"
#include "diffsim/parallel.hpp"
#include "diffsim/rng.hpp"

namespace diffsim::learn {

namespace {
constexpr double kFailedChunkPenalty = 1e6;
}

ParamLayout layout_for(const SystemSpec& spec) {
  ParamLayout layout;
  layout.n_masses = spec.n_bodies();
  layout.n_classes = spec.n_contact_classes();
  layout.n_potential = spec.n_potential_constants();
  return layout;
}

PhysParams decode(const Eigen::VectorXd& theta, const ParamLayout& layout) {
  PhysParams params;
  params.masses = theta.segment(layout.mass_offset(), layout.n_masses).array().exp();
  params.mu = theta.segment(layout.mu_offset(), layout.n_classes).cwiseMax(0.0);
  params.e_p = (0.25 * theta.segment(layout.e_offset(), layout.n_classes).array() + 0.5)
                   .cwiseMax(0.0)
                   .cwiseMin(1.0);
  params.potential_constants =
      theta.segment(layout.potential_offset(), layout.n_potential).array().exp();
  return params;
}

Eigen::VectorXd encode(const PhysParams& params, const ParamLayout& layout) {
  Eigen::VectorXd theta(layout.size());
  theta.segment(layout.mass_offset(), layout.n_masses) = params.masses.array().log();
  theta.segment(layout.mu_offset(), layout.n_classes) = params.mu;
  theta.segment(layout.e_offset(), layout.n_classes) = (params.e_p.array() - 0.5) / 0.25;
  theta.segment(layout.potential_offset(), layout.n_potential) =
      params.potential_constants.array().log();
  return theta;
}

LossDetail trajectory_loss_detail(const Eigen::VectorXd& theta, const ParamLayout& layout,
                                  const SystemSpec& spec, const sim::Dataset& dataset,
                                  const sim::SimOptions& rollout, int threads) {
  const PhysParams params = decode(theta, layout);
  const int n = static_cast<int>(dataset.chunks.size());
  std::vector<double> chunk_loss(n, 0.0);
  std::vector<double> chunk_rel(n, 0.0);
  std::vector<std::uint8_t> failed(n, 0);

  sim::SimOptions opts = rollout;
  opts.dt = dataset.options.dt;
  opts.n_steps = dataset.t_chunk - 1;

  parallel_for(n, threads, [&](int i) {
    const sim::DatasetChunk& chunk = dataset.chunks[i];
    try {
      const Trajectory pred = sim::simulate(spec, params, chunk.states.front(), opts);
      double abs_sum = 0.0;
      double true_sum = 0.0;
      for (int k = 1; k < dataset.t_chunk; ++k) {
        abs_sum += (pred.states[k].x - chunk.states[k].x).lpNorm<1>();
        abs_sum += (pred.states[k].v - chunk.states[k].v).lpNorm<1>();
        true_sum += chunk.states[k].x.lpNorm<1>() + chunk.states[k].v.lpNorm<1>();
      }
      chunk_loss[i] = abs_sum;
      chunk_rel[i] = abs_sum / (true_sum + 1e-12);
    } catch (const Error&) {
      failed[i] = 1;
      chunk_loss[i] = kFailedChunkPenalty;
      chunk_rel[i] = 1.0;
    }
  });

  LossDetail detail;
  detail.rel_per_chunk = std::move(chunk_rel);
  for (int i = 0; i < n; ++i) {
    detail.total += chunk_loss[i];
    detail.failed_chunks += failed[i];
  }
  return detail;
}

double trajectory_loss(const Eigen::VectorXd& theta, const ParamLayout& layout,
                       const SystemSpec& spec, const sim::Dataset& dataset,
                       const sim::SimOptions& rollout, int threads) {
  return trajectory_loss_detail(theta, layout, spec, dataset, rollout, threads).total;
}

Eigen::VectorXd fd_gradient(const Eigen::VectorXd& theta, const LossFn& loss, int threads) {
  const int n = static_cast<int>(theta.size());
  Eigen::VectorXd grad(n);
  parallel_for(n, threads, [&](int i) {
    const double h = 1e-5 * (1.0 + std::abs(theta[i]));
    Eigen::VectorXd plus = theta;
    Eigen::VectorXd minus = theta;
    plus[i] += h;
    minus[i] -= h;
    grad[i] = (loss(plus) - loss(minus)) / (2.0 * h);
  });
  return grad;
}

void AdamW::step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad) {
  if (m.size() != theta.size()) {
    m = Eigen::VectorXd::Zero(theta.size());
    v = Eigen::VectorXd::Zero(theta.size());
    step_count = 0;
  }
  ++step_count;
  m = beta1 * m + (1.0 - beta1) * grad;
  v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
  const double bias1 = 1.0 - std::pow(beta1, step_count);
  const double bias2 = 1.0 - std::pow(beta2, step_count);
  if (weight_decay > 0.0) theta -= lr * weight_decay * theta;
  theta -= (lr / bias1) * m.cwiseQuotient(((v / bias2).cwiseSqrt().array() + eps).matrix());
}

Eigen::VectorXd initial_theta(const ParamLayout& layout, std::uint64_t seed) {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(layout.size());
  theta.segment(layout.mu_offset(), layout.n_classes).setConstant(0.1);
  Rng rng(seed);
  for (int i = 0; i < theta.size(); ++i) theta[i] += 0.01 * rng.normal();
  return theta;
}

Eigen::VectorXd mass_ratios(const PhysParams& params) {
  const int n = static_cast<int>(params.masses.size());
  Eigen::VectorXd ratios(std::max(0, n - 1));
  for (int i = 1; i < n; ++i) ratios[i - 1] = params.masses[i] / params.masses[0];
  return ratios;
}

sim::Dataset with_noise(const sim::Dataset& dataset, double sigma, std::uint64_t seed) {
  if (sigma <= 0.0) return dataset;
  sim::Dataset noisy = dataset;
  Rng rng(seed);
  for (auto& chunk : noisy.chunks) {
    for (auto& state : chunk.states) {
      for (int i = 0; i < state.x.size(); ++i) state.x[i] += sigma * rng.normal();
      for (int i = 0; i < state.v.size(); ++i) state.v[i] += sigma * rng.normal();
    }
  }
  return noisy;
}

FitReport fit(const SystemSpec& spec, const sim::Dataset& dataset, std::uint64_t init_seed,
              const FitOptions& options) {
  const ParamLayout layout = layout_for(spec);
  const sim::Dataset data = with_noise(dataset, options.noise_sigma, options.noise_seed);

  Eigen::VectorXd theta = initial_theta(layout, init_seed);
  AdamW optimizer;
  optimizer.lr = options.lr;

  const LossFn loss_fn = [&](const Eigen::VectorXd& t) {
    return trajectory_loss(t, layout, spec, data, options.sim, 1);
  };

  FitReport report;
  double best_window_loss = std::numeric_limits<double>::infinity();
  int stalled = 0;

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    const LossDetail detail =
        trajectory_loss_detail(theta, layout, spec, data, options.sim, options.threads);
    report.losses.push_back(detail.total);
    report.rel_errors.push_back(detail.mean_rel());
    report.epochs_run = epoch + 1;

    if (options.verbose && epoch % 50 == 0) {
      std::fprintf(stderr, "epoch %d loss %.6e\n", epoch, detail.total);
    }

    if (detail.total < best_window_loss - options.early_stop_improvement) {
      best_window_loss = detail.total;
      stalled = 0;
    } else if (++stalled >= options.early_stop_window) {
      break;
    }

    const Eigen::VectorXd grad = fd_gradient(theta, loss_fn, options.threads);
    optimizer.step(theta, grad);
  }

  report.theta = theta;
  report.decoded = decode(theta, layout);
  report.mass_ratios = mass_ratios(report.decoded);
  report.final_loss = report.losses.empty() ? 0.0 : report.losses.back();
  return report;
}

}  // namespace diffsim::learn
