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

#ifndef DIFFSIM_LEARN_HPP_
#define DIFFSIM_LEARN_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "diffsim/sim.hpp"
#include "diffsim/types.hpp"

namespace diffsim::learn {

// Flat parameter vector layout: [log-masses | mu-raw | e-raw | potential-raw].
struct ParamLayout {
  int n_masses = 0;
  int n_classes = 0;
  int n_potential = 0;

  int size() const { return n_masses + 2 * n_classes + n_potential; }
  int mass_offset() const { return 0; }
  int mu_offset() const { return n_masses; }
  int e_offset() const { return n_masses + n_classes; }
  int potential_offset() const { return n_masses + 2 * n_classes; }
};

ParamLayout layout_for(const SystemSpec& spec);

// masses = exp(theta_m), mu = relu(theta_mu), e_p = hard_sigmoid(theta_e) =
// clamp(0.25 x + 0.5, 0, 1), potential constants = exp(theta_V). Any finite
// theta decodes to valid physical parameters.
PhysParams decode(const Eigen::VectorXd& theta, const ParamLayout& layout);

// Inverse of decode where one exists (mu > 0 maps to itself; e_p hits the
// clamp corners at exactly 0 and 1).
Eigen::VectorXd encode(const PhysParams& params, const ParamLayout& layout);

using LossFn = std::function<double(const Eigen::VectorXd&)>;

struct LossDetail {
  double total = 0.0;
  std::vector<double> rel_per_chunk;
  int failed_chunks = 0;

  double mean_rel() const {
    if (rel_per_chunk.empty()) return 0.0;
    double s = 0.0;
    for (double r : rel_per_chunk) s += r;
    return s / static_cast<double>(rel_per_chunk.size());
  }
};

// L1 distance between predicted and recorded chunk trajectories, summed over
// chunks, steps and coordinates (positions and velocities). Chunks whose
// rollout fails contribute a fixed large penalty.
LossDetail trajectory_loss_detail(const Eigen::VectorXd& theta, const ParamLayout& layout,
                                  const SystemSpec& spec, const sim::Dataset& dataset,
                                  const sim::SimOptions& rollout, int threads = 1);

double trajectory_loss(const Eigen::VectorXd& theta, const ParamLayout& layout,
                       const SystemSpec& spec, const sim::Dataset& dataset,
                       const sim::SimOptions& rollout, int threads = 1);

// Central finite differences with h_i = 1e-5 (1 + |theta_i|); components are
// evaluated independently.
Eigen::VectorXd fd_gradient(const Eigen::VectorXd& theta, const LossFn& loss,
                            int threads = 1);

// Adam with decoupled weight decay (decay defaults to 0: decaying physical
// parameters toward zero would bias the estimates).
struct AdamW {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;

  Eigen::VectorXd m;
  Eigen::VectorXd v;
  int step_count = 0;

  void step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad);
};

struct FitOptions {
  int epochs = 3000;
  double lr = 1e-3;
  int threads = 1;
  double noise_sigma = 0.0;  // optional observation noise added at load time
  std::uint64_t noise_seed = 0;
  double early_stop_improvement = 1e-10;
  int early_stop_window = 50;
  sim::SimOptions sim;  // rollout variant; dt is forced to the dataset's dt
  bool verbose = false;
};

struct FitReport {
  double final_loss = 0.0;
  int epochs_run = 0;
  std::vector<double> losses;
  std::vector<double> rel_errors;
  Eigen::VectorXd theta;
  PhysParams decoded;
  Eigen::VectorXd mass_ratios;  // m_i / m_1 for i >= 2
};

// Full-batch loop: trajectory loss, finite-difference gradient, AdamW update,
// with early stopping on stalled loss.
FitReport fit(const SystemSpec& spec, const sim::Dataset& dataset, std::uint64_t init_seed,
              const FitOptions& options);

// Gaussian observation noise on every recorded coordinate.
sim::Dataset with_noise(const sim::Dataset& dataset, double sigma, std::uint64_t seed);

// Initialization used by fit: log-masses 0, mu-raw 0.1, e-raw 0, potential-raw
// 0, plus N(0, 0.01) perturbation from the seed.
Eigen::VectorXd initial_theta(const ParamLayout& layout, std::uint64_t seed);

Eigen::VectorXd mass_ratios(const PhysParams& params);

}  // namespace diffsim::learn

#endif  // DIFFSIM_LEARN_HPP_
