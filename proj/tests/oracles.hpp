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
//
// Test-only reference implementations, independent of the production solver
// path: a brute-force grid minimizer over friction-cone products and small
// finite-difference helpers.

#ifndef DIFFSIM_TESTS_ORACLES_HPP_
#define DIFFSIM_TESTS_ORACLES_HPP_

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "diffsim/rng.hpp"
#include "diffsim/socp.hpp"

namespace diffsim::test_oracles {

// Grid parametrization of one cone block: p in [0,1]^k maps to a feasible
// block value. k = 1 for 1-D cones, 2 for 2-D, 3 for 3-D. The normal
// component is warped quadratically so small impulses get fine resolution.
inline int block_params(const socp::ConeSpec& cone) {
  if (cone.dim == 1 || cone.mu <= 0.0) return 1;
  return cone.dim;
}

inline Eigen::VectorXd block_value(const socp::ConeSpec& cone, const double* p,
                                   double span) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(cone.dim);
  const double pn = std::clamp(p[0], 0.0, 1.0);
  f[0] = cone.lower_bound + span * pn * pn;
  if (cone.dim == 1 || cone.mu <= 0.0) return f;
  const double reach = cone.mu * f[0];
  if (cone.dim == 2) {
    f[1] = reach * (2.0 * std::clamp(p[1], 0.0, 1.0) - 1.0);
  } else {
    const double rho = std::clamp(p[1], 0.0, 1.0);
    const double phi = 2.0 * M_PI * p[2];  // periodic, no clamp
    f[1] = reach * rho * std::cos(phi);
    f[2] = reach * rho * std::sin(phi);
  }
  return f;
}

// Minimizes 0.5 f^T A f + b^T f over the product of cones: a global grid scan
// picks the basin, then pattern search in the parametrization polishes it.
// The objective is convex in f, so a local descent from the right basin is
// globally correct.
inline Eigen::VectorXd grid_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                  const std::vector<socp::ConeSpec>& cones,
                                  int global_pts = 0) {
  const int n = static_cast<int>(b.size());
  // Objective at f = 0 is 0, so 0.5 lmin |f|^2 - |b||f| <= 0 bounds the
  // optimum by 2|b|/lmin.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  const double lmin = eig.eigenvalues().minCoeff();
  const double span = lmin > 1e-12 ? 2.4 * b.norm() / lmin : 10.0 * (1.0 + b.norm());

  int total_params = 0;
  for (const auto& cone : cones) total_params += block_params(cone);
  if (global_pts == 0) global_pts = total_params <= 3 ? 33 : 15;

  const auto value_at = [&](const std::vector<double>& p) {
    Eigen::VectorXd f(n);
    int off = 0, pp = 0;
    for (const auto& cone : cones) {
      f.segment(off, cone.dim) = block_value(cone, p.data() + pp, span);
      off += cone.dim;
      pp += block_params(cone);
    }
    return f;
  };
  const auto objective_at = [&](const std::vector<double>& p) {
    const Eigen::VectorXd f = value_at(p);
    return 0.5 * f.dot(a * f) + b.dot(f);
  };

  // Parameter roles: 'n' = warped normal, 't' = 2-D tangent ratio, 'r' = 3-D
  // radial ratio, 'f' = 3-D angle.
  std::vector<char> roles;
  for (const auto& cone : cones) {
    roles.push_back('n');
    if (block_params(cone) >= 2) roles.push_back(cone.dim == 2 ? 't' : 'r');
    if (block_params(cone) == 3) roles.push_back('f');
  }

  std::vector<double> global_p(total_params, 0.0);
  double global_obj = objective_at(global_p);
  std::vector<int> counter(total_params, 0);
  std::vector<double> p(total_params);
  while (true) {
    for (int i = 0; i < total_params; ++i) p[i] = counter[i] / double(global_pts - 1);
    const double obj = objective_at(p);
    if (obj < global_obj) {
      global_obj = obj;
      global_p = p;
    }
    int k = 0;
    while (k < total_params && ++counter[k] == global_pts) counter[k++] = 0;
    if (k == total_params) break;
  }

  // Pattern search (axis plus pairwise diagonal moves) with shrinking steps.
  const auto pattern_search = [&](std::vector<double> start) {
    double incumbent = objective_at(start);
    double step = 1.0 / (global_pts - 1);
    while (step > 1e-10) {
      bool improved = false;
      auto try_move = [&](const std::vector<double>& trial) {
        const double obj = objective_at(trial);
        if (obj < incumbent) {
          incumbent = obj;
          start = trial;
          improved = true;
        }
      };
      for (int i = 0; i < total_params; ++i) {
        for (double dir : {+1.0, -1.0}) {
          std::vector<double> trial = start;
          trial[i] += dir * step;
          try_move(trial);
        }
      }
      for (int i = 0; i < total_params; ++i) {
        for (int j = i + 1; j < total_params; ++j) {
          for (double di : {+1.0, -1.0}) {
            for (double dj : {+1.0, -1.0}) {
              std::vector<double> trial = start;
              trial[i] += di * step;
              trial[j] += dj * step;
              try_move(trial);
            }
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    return std::make_pair(incumbent, start);
  };

  // The parametrization degenerates at f_n = 0 (tangential parameters do
  // nothing there), so tiny-impulse optima need starts with the tangential
  // direction pre-positioned on a lattice.
  std::vector<std::vector<double>> starts = {global_p};
  std::vector<std::vector<double>> lattice = {{}};
  const double small_n = 0.5 / (global_pts - 1);
  for (int i = 0; i < total_params; ++i) {
    std::vector<double> values;
    switch (roles[i]) {
      case 'n': values = {small_n}; break;
      case 't': values = {0.0, 0.25, 0.5, 0.75, 1.0}; break;
      case 'r': values = {0.5, 1.0}; break;
      case 'f': values = {0.1, 0.3, 0.5, 0.7, 0.9}; break;
    }
    std::vector<std::vector<double>> next;
    for (const auto& prefix : lattice) {
      for (double value : values) {
        auto extended = prefix;
        extended.push_back(value);
        next.push_back(std::move(extended));
      }
    }
    lattice = std::move(next);
  }
  starts.insert(starts.end(), lattice.begin(), lattice.end());

  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<double> best_p;
  for (const auto& start : starts) {
    const auto [obj, point] = pattern_search(start);
    if (obj < best_obj) {
      best_obj = obj;
      best_p = point;
    }
  }
  return value_at(best_p);
}

// Central-difference gradient of a scalar function.
inline Eigen::VectorXd fd_grad(const std::function<double(const Eigen::VectorXd&)>& f,
                               const Eigen::VectorXd& x, double h = 1e-6) {
  Eigen::VectorXd g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

inline Eigen::MatrixXd random_spd(int n, diffsim::Rng& rng, double ridge = 1.0) {
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  }
  return g.transpose() * g + ridge * Eigen::MatrixXd::Identity(n, n);
}

inline Eigen::VectorXd random_vector(int n, diffsim::Rng& rng, double scale = 1.0) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = scale * rng.normal();
  return v;
}

}  // namespace diffsim::test_oracles

#endif  // DIFFSIM_TESTS_ORACLES_HPP_
