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

#include "diffsim/socp.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "diffsim/errors.hpp"
#include "diffsim/linalg.hpp"

namespace diffsim::socp {

namespace {

// Closed-form projection onto {(t, u) : |u| <= mu * t} for mu > 0.
Eigen::VectorXd project_soc(const Eigen::VectorXd& y, double mu) {
  const double s = y[0];
  const Eigen::VectorXd w = y.tail(y.size() - 1);
  const double r = w.norm();
  if (r <= mu * s) return y;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(y.size());
  if (mu * r <= -s) return out;  // polar cone: apex
  const double t = (s + mu * r) / (1.0 + mu * mu);
  out[0] = t;
  out.tail(y.size() - 1) = (mu * t / r) * w;
  return out;
}

double objective(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                 const Eigen::VectorXd& f) {
  return 0.5 * f.dot(a * f) + f.dot(b);
}

}  // namespace

Eigen::VectorXd project_cone(const Eigen::VectorXd& y, double mu, double lower_bound) {
  if (y.size() == 1) {
    Eigen::VectorXd out(1);
    out[0] = std::max(y[0], lower_bound);
    return out;
  }
  if (mu <= 0.0) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(y.size());
    out[0] = std::max(y[0], lower_bound);
    return out;
  }
  if (lower_bound <= 0.0) return project_soc(y, mu);

  // Dykstra's alternating projections onto cone and half-space; plain
  // alternation does not generally give the Euclidean projection onto the
  // intersection.
  Eigen::VectorXd x = y;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(y.size());
  Eigen::VectorXd q = Eigen::VectorXd::Zero(y.size());
  for (int sweep = 0; sweep < 100; ++sweep) {
    const Eigen::VectorXd cone_in = x + p;
    const Eigen::VectorXd cone_out = project_soc(cone_in, mu);
    const Eigen::VectorXd p_next = cone_in - cone_out;
    Eigen::VectorXd half_in = cone_out + q;
    Eigen::VectorXd half_out = half_in;
    half_out[0] = std::max(half_in[0], lower_bound);
    const Eigen::VectorXd q_next = half_in - half_out;
    // The iterate can stall at a corner while the correction vectors still
    // move, so convergence watches the whole algorithm state.
    const double moved = (half_out - x).lpNorm<Eigen::Infinity>() +
                         (p_next - p).lpNorm<Eigen::Infinity>() +
                         (q_next - q).lpNorm<Eigen::Infinity>();
    x = half_out;
    p = p_next;
    q = q_next;
    if (moved < 1e-12) break;
  }
  return x;
}

void project_product_cone(const ConeQP& qp, Eigen::VectorXd& y) {
  int offset = 0;
  for (const ConeSpec& cone : qp.cones) {
    y.segment(offset, cone.dim) =
        project_cone(y.segment(offset, cone.dim), cone.mu, cone.lower_bound);
    offset += cone.dim;
  }
}

ImpulseSolution solve(const ConeQP& qp, const SolveOptions& options,
                      const Eigen::VectorXd* warm_start) {
  const int n = qp.size();
  ImpulseSolution sol;
  if (n == 0) {
    sol.converged = true;
    return sol;
  }

  const Eigen::MatrixXd a = qp.a_factor.transpose() * qp.a_factor;
  const Eigen::VectorXd& b = qp.linear;
  const double lambda = std::max(max_eigenvalue(a), 1e-12);
  const double inv_lambda = 1.0 / lambda;

  Eigen::VectorXd f = warm_start ? *warm_start : Eigen::VectorXd::Zero(n);
  project_product_cone(qp, f);
  Eigen::VectorXd f_prev = f;
  Eigen::VectorXd y = f;
  double tk = 1.0;

  Eigen::VectorXd best_f = f;
  double best_obj = objective(a, b, f);

  int iterations = 0;
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    iterations = iter;
    const Eigen::VectorXd grad_y = a * y + b;
    Eigen::VectorXd f_new = y - inv_lambda * grad_y;
    project_product_cone(qp, f_new);

    const Eigen::VectorXd grad_new = a * f_new + b;
    const double obj_new = 0.5 * (f_new.dot(grad_new) + f_new.dot(b));
    Eigen::VectorXd fixed_point = f_new - inv_lambda * grad_new;
    project_product_cone(qp, fixed_point);
    const double residual = (f_new - fixed_point).lpNorm<Eigen::Infinity>();

    if (obj_new <= best_obj + 1e-12 * (1.0 + std::abs(best_obj))) {
      if (obj_new < best_obj) best_obj = obj_new;
      best_f = f_new;
    }
    if (residual <= options.tol) {
      best_f = f_new;
      f = f_new;
      break;
    }

    // Adaptive restart keeps the momentum sequence monotone in practice.
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    if ((y - f_new).dot(f_new - f_prev) > 0.0) {
      y = f_new;
      tk = 1.0;
    } else {
      y = f_new + ((tk - 1.0) / t_next) * (f_new - f_prev);
      tk = t_next;
    }
    f_prev = f_new;
    f = f_new;
  }

  // Residual and convergence are reported at the returned (best) iterate.
  const Eigen::VectorXd grad_best = a * best_f + b;
  Eigen::VectorXd fixed_point = best_f - inv_lambda * grad_best;
  project_product_cone(qp, fixed_point);
  sol.f = best_f;
  sol.iterations = iterations;
  sol.primal_residual = (best_f - fixed_point).lpNorm<Eigen::Infinity>();
  sol.converged = sol.primal_residual <= options.tol;
  return sol;
}

Eigen::MatrixXd sensitivity(const ConeQP& qp, const ImpulseSolution& solution,
                            SensitivityInput wrt, const SolveOptions& options) {
  const int n = qp.size();
  const int n_cones = static_cast<int>(qp.cones.size());
  const int n_cols = wrt == SensitivityInput::kLinear ? n : n_cones;
  Eigen::MatrixXd out(n, n_cols);

  for (int j = 0; j < n_cols; ++j) {
    auto value_of = [&](const ConeQP& p) -> double {
      switch (wrt) {
        case SensitivityInput::kLinear:
          return p.linear[j];
        case SensitivityInput::kMu:
          return p.cones[j].mu;
        case SensitivityInput::kLowerBound:
          return p.cones[j].lower_bound;
      }
      return 0.0;
    };
    auto shifted = [&](double delta) {
      ConeQP p = qp;
      switch (wrt) {
        case SensitivityInput::kLinear:
          p.linear[j] += delta;
          break;
        case SensitivityInput::kMu:
          p.cones[j].mu += delta;
          break;
        case SensitivityInput::kLowerBound:
          p.cones[j].lower_bound += delta;
          break;
      }
      return p;
    };

    const double base = value_of(qp);
    const double h = 1e-5 * (1.0 + std::abs(base));
    // mu and lower_bound may not go negative; fall back to a forward
    // difference at the domain boundary.
    const bool one_sided = wrt != SensitivityInput::kLinear && base - h < 0.0;
    const ConeQP qp_plus = shifted(h);
    const ImpulseSolution plus = solve(qp_plus, options, &solution.f);
    if (one_sided) {
      out.col(j) = (plus.f - solution.f) / h;
    } else {
      const ConeQP qp_minus = shifted(-h);
      const ImpulseSolution minus = solve(qp_minus, options, &solution.f);
      out.col(j) = (plus.f - minus.f) / (2.0 * h);
    }
  }
  return out;
}

namespace {

struct ActiveRow {
  enum Kind { kConeRow, kBoundRow, kPinRow } kind;
  int cone = 0;              // owning cone index
  Eigen::VectorXd gradient;  // over the full impulse vector
};

}  // namespace

Eigen::MatrixXd sensitivity_kkt(const ConeQP& qp, const ImpulseSolution& solution,
                                SensitivityInput wrt) {
  const int n = qp.size();
  const int n_cones = static_cast<int>(qp.cones.size());
  const Eigen::MatrixXd a = qp.a_factor.transpose() * qp.a_factor;
  const Eigen::VectorXd res = a * solution.f + qp.linear;
  const double scale = 1.0 + res.lpNorm<Eigen::Infinity>();
  const double atol = 1e-7 * scale;

  std::vector<ActiveRow> rows;
  std::vector<int> cone_row_of(n_cones, -1);   // index into rows
  std::vector<int> bound_row_of(n_cones, -1);
  Eigen::MatrixXd hessian = a;

  int offset = 0;
  for (int i = 0; i < n_cones; ++i) {
    const ConeSpec& cone = qp.cones[i];
    const int d = cone.dim;
    const double fn = solution.f[offset];
    const Eigen::VectorXd ft = solution.f.segment(offset + 1, d - 1);
    const double r = ft.norm();
    const bool bound_active = std::abs(fn - cone.lower_bound) <= atol * (1.0 + std::abs(fn));

    if (d == 1 || cone.mu <= 0.0) {
      // Tangential components are structurally pinned at zero.
      for (int t = 1; t < d; ++t) {
        ActiveRow pin{ActiveRow::kPinRow, i, Eigen::VectorXd::Zero(n)};
        pin.gradient[offset + t] = 1.0;
        rows.push_back(pin);
      }
      if (bound_active) {
        ActiveRow row{ActiveRow::kBoundRow, i, Eigen::VectorXd::Zero(n)};
        row.gradient[offset] = 1.0;
        bound_row_of[i] = static_cast<int>(rows.size());
        rows.push_back(row);
      }
      offset += d;
      continue;
    }

    if (r <= atol) {
      if (bound_active && cone.lower_bound <= atol) {
        // Apex. Locally constant only when the negated gradient sits strictly
        // inside the polar cone.
        const double res_n = res[offset];
        const double rt = res.segment(offset + 1, d - 1).norm();
        if (res_n > cone.mu * rt + atol) {
          for (int t = 0; t < d; ++t) {
            ActiveRow pin{ActiveRow::kPinRow, i, Eigen::VectorXd::Zero(n)};
            pin.gradient[offset + t] = 1.0;
            rows.push_back(pin);
          }
          offset += d;
          continue;
        }
        throw DegenerateActiveSet("sensitivity_kkt: apex without strict polar interiority");
      }
      // Zero tangent away from the apex: cone constraint inactive, tangent
      // stationary; bound may still be active.
      if (bound_active) {
        ActiveRow row{ActiveRow::kBoundRow, i, Eigen::VectorXd::Zero(n)};
        row.gradient[offset] = 1.0;
        bound_row_of[i] = static_cast<int>(rows.size());
        rows.push_back(row);
      }
      offset += d;
      continue;
    }

    const bool cone_active = std::abs(cone.mu * fn - r) <= atol * (1.0 + r);
    if (cone_active) {
      ActiveRow row{ActiveRow::kConeRow, i, Eigen::VectorXd::Zero(n)};
      row.gradient[offset] = cone.mu;
      row.gradient.segment(offset + 1, d - 1) = -ft / r;
      cone_row_of[i] = static_cast<int>(rows.size());
      rows.push_back(row);
    }
    if (bound_active) {
      ActiveRow row{ActiveRow::kBoundRow, i, Eigen::VectorXd::Zero(n)};
      row.gradient[offset] = 1.0;
      bound_row_of[i] = static_cast<int>(rows.size());
      rows.push_back(row);
    }
    offset += d;
  }

  const int n_rows = static_cast<int>(rows.size());
  Eigen::MatrixXd g(n_rows, n);
  for (int r2 = 0; r2 < n_rows; ++r2) g.row(r2) = rows[r2].gradient.transpose();

  // Multipliers from stationarity A f + b = G^T lambda.
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(n_rows);
  if (n_rows > 0) {
    lambda = (g * g.transpose()).fullPivLu().solve(g * res);
    const double fit = (res - g.transpose() * lambda).lpNorm<Eigen::Infinity>();
    if (fit > 1e-5 * scale) {
      throw DegenerateActiveSet("sensitivity_kkt: stationarity residual too large");
    }
  } else if (res.lpNorm<Eigen::Infinity>() > 1e-5 * scale) {
    throw DegenerateActiveSet("sensitivity_kkt: free solution is not stationary");
  }

  // Strict complementarity for inequality rows.
  for (int r2 = 0; r2 < n_rows; ++r2) {
    if (rows[r2].kind != ActiveRow::kPinRow && lambda[r2] <= 1e-8 * scale) {
      throw DegenerateActiveSet("sensitivity_kkt: weakly active constraint");
    }
  }

  // Curvature of active cone constraints.
  offset = 0;
  for (int i = 0; i < n_cones; ++i) {
    const int d = qp.cones[i].dim;
    const int row = cone_row_of[i];
    if (row >= 0) {
      const Eigen::VectorXd ft = solution.f.segment(offset + 1, d - 1);
      const double r = ft.norm();
      const Eigen::VectorXd dir = ft / r;
      Eigen::MatrixXd tangent_proj = Eigen::MatrixXd::Identity(d - 1, d - 1) - dir * dir.transpose();
      hessian.block(offset + 1, offset + 1, d - 1, d - 1) += (lambda[row] / r) * tangent_proj;
    }
    offset += d;
  }

  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + n_rows, n + n_rows);
  kkt.topLeftCorner(n, n) = hessian;
  if (n_rows > 0) {
    kkt.topRightCorner(n, n_rows) = -g.transpose();
    kkt.bottomLeftCorner(n_rows, n) = g;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
  if (!lu.isInvertible()) {
    throw DegenerateActiveSet("sensitivity_kkt: singular KKT system");
  }

  const int n_cols = wrt == SensitivityInput::kLinear ? n : n_cones;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + n_rows, n_cols);
  offset = 0;
  for (int i = 0; i < n_cones && wrt != SensitivityInput::kLinear; ++i) {
    if (wrt == SensitivityInput::kMu) {
      if (qp.cones[i].mu <= 0.0 && qp.cones[i].dim > 1) {
        throw DegenerateActiveSet("sensitivity_kkt: mu derivative at mu = 0");
      }
      const int row = cone_row_of[i];
      if (row >= 0) {
        rhs(offset, i) = lambda[row];
        rhs(n + row, i) = -solution.f[offset];
      }
    } else {  // kLowerBound
      const int row = bound_row_of[i];
      if (row >= 0) rhs(n + row, i) = 1.0;
    }
    offset += qp.cones[i].dim;
  }
  if (wrt == SensitivityInput::kLinear) {
    rhs.topLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  }

  const Eigen::MatrixXd full = lu.solve(rhs);
  return full.topRows(n);
}

}  // namespace diffsim::socp
