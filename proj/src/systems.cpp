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

#include "diffsim/systems.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Geometry>

#include <json.hpp>

#include "diffsim/dynamics.hpp"
#include "diffsim/errors.hpp"

namespace diffsim::systems {

namespace {

using contact::ActiveContact;
using contact::ActiveContactSet;

Eigen::VectorXd point_of(const SystemSpec& spec, const Eigen::VectorXd& x, int point) {
  return x.segment(point * spec.ambient_dim, spec.ambient_dim);
}

// Affine weights of a world point p on a body: p = com + sum_k a_k e_k gives
// weights (1 - sum a_k, a_1, ...) over the body's coordinate points.
std::vector<std::pair<int, double>> body_point_weights(const SystemSpec& spec,
                                                       const BodyDescriptor& body,
                                                       const Eigen::VectorXd& x,
                                                       const Eigen::VectorXd& p) {
  if (body.kind == BodyKind::kPointMass) {
    return {{body.points[0], 1.0}};
  }
  const Eigen::VectorXd com = point_of(spec, x, body.points[0]);
  std::vector<std::pair<int, double>> weights;
  weights.emplace_back(body.points[0], 1.0);
  for (size_t k = 1; k < body.points.size(); ++k) {
    const Eigen::VectorXd axis = point_of(spec, x, body.points[k]) - com;
    const double coeff = axis.dot(p - com) / axis.squaredNorm();
    weights.emplace_back(body.points[k], coeff);
    weights.front().second -= coeff;
  }
  return weights;
}

ActiveContact make_frictional(const SystemSpec& spec, int candidate_index,
                              const ContactCandidate& cand, const Eigen::VectorXd& normal,
                              double penetration,
                              std::vector<std::pair<int, double>> side_a,
                              std::vector<std::pair<int, double>> side_b) {
  ActiveContact contact;
  contact.candidate_index = candidate_index;
  contact.contact_class = cand.contact_class;
  contact.dim = spec.ambient_dim;
  contact.penetration = penetration;
  contact.normal = normal;
  contact.tangents = contact::tangent_basis(normal);
  contact.side_a = std::move(side_a);
  contact.side_b = std::move(side_b);
  contact.jacobian_rows = contact::contact_rows(spec, contact);
  return contact;
}

ActiveContact make_limit(const SystemSpec& spec, int candidate_index,
                         const ContactCandidate& cand, double penetration,
                         const Eigen::MatrixXd& row) {
  ActiveContact contact;
  contact.candidate_index = candidate_index;
  contact.contact_class = cand.contact_class;
  contact.dim = 1;
  contact.penetration = penetration;
  contact.limit_row = row;
  contact.jacobian_rows = row;
  return contact;
}

Eigen::Vector2d perp(const Eigen::Vector2d& s) { return {-s[1], s[0]}; }

}  // namespace

ActiveContactSet detect_contacts(const SystemSpec& spec, const Eigen::VectorXd& x) {
  ActiveContactSet set;
  const int adim = spec.ambient_dim;

  for (size_t ci = 0; ci < spec.contact_candidates.size(); ++ci) {
    const ContactCandidate& cand = spec.contact_candidates[ci];
    const int index = static_cast<int>(ci);
    switch (cand.kind) {
      case CandidateKind::kSpherePair: {
        const BodyDescriptor& body_a = spec.bodies[cand.body_a];
        const BodyDescriptor& body_b = spec.bodies[cand.body_b];
        const Eigen::VectorXd ca = point_of(spec, x, body_a.points[0]);
        const Eigen::VectorXd cb = point_of(spec, x, body_b.points[0]);
        const Eigen::VectorXd d = ca - cb;
        const double dist = d.norm();
        const double reach = body_a.radius + body_b.radius;
        if (dist >= reach || dist < 1e-12) break;
        const Eigen::VectorXd n = d / dist;
        // Contact point at the midpoint of the overlap segment.
        const Eigen::VectorXd p = 0.5 * ((ca - body_a.radius * n) + (cb + body_b.radius * n));
        set.contacts.push_back(make_frictional(
            spec, index, cand, n, reach - dist,
            body_point_weights(spec, body_a, x, p), body_point_weights(spec, body_b, x, p)));
        break;
      }
      case CandidateKind::kSpherePlane: {
        const BodyDescriptor& body = spec.bodies[cand.body_a];
        const Eigen::VectorXd c = point_of(spec, x, body.points[0]);
        const double dist = cand.plane_normal.dot(c - cand.plane_point);
        if (dist >= body.radius) break;
        const Eigen::VectorXd p = c - body.radius * cand.plane_normal;
        set.contacts.push_back(make_frictional(spec, index, cand, cand.plane_normal,
                                               body.radius - dist,
                                               body_point_weights(spec, body, x, p), {}));
        break;
      }
      case CandidateKind::kStretchLimit: {
        const Eigen::VectorXd xi = point_of(spec, x, cand.point_i);
        const Eigen::VectorXd xj = point_of(spec, x, cand.point_j);
        const Eigen::VectorXd d = xi - xj;
        const double len = d.norm();
        const double upper = cand.max_ratio * cand.rest_length;
        const double lower = cand.min_ratio * cand.rest_length;
        if (len <= upper && len >= lower) break;
        if (len < 1e-12) break;
        const Eigen::VectorXd u = d / len;
        Eigen::MatrixXd row = Eigen::MatrixXd::Zero(1, spec.dim);
        double penetration = 0.0;
        if (len > upper) {
          // gap = upper - |xi - xj|
          row.block(0, cand.point_i * adim, 1, adim) = -u.transpose();
          row.block(0, cand.point_j * adim, 1, adim) = u.transpose();
          penetration = len - upper;
        } else {
          // gap = |xi - xj| - lower
          row.block(0, cand.point_i * adim, 1, adim) = u.transpose();
          row.block(0, cand.point_j * adim, 1, adim) = -u.transpose();
          penetration = lower - len;
        }
        set.contacts.push_back(make_limit(spec, index, cand, penetration, row));
        break;
      }
      case CandidateKind::kBendLimit: {
        const Eigen::Vector2d xi = point_of(spec, x, cand.point_i);
        const Eigen::Vector2d xj = point_of(spec, x, cand.point_j);
        const Eigen::Vector2d xk = point_of(spec, x, cand.point_k);
        const Eigen::Vector2d s1 = xj - xi;
        const Eigen::Vector2d s2 = xk - xj;
        const double cross = s1[0] * s2[1] - s1[1] * s2[0];
        const double angle = std::atan2(cross, s1.dot(s2));
        if (std::abs(angle) <= cand.max_angle) break;
        const double sign = angle >= 0.0 ? 1.0 : -1.0;
        // gap = max_angle - |angle|; row is -sign * grad(angle).
        const Eigen::Vector2d d_xi = perp(s1) / s1.squaredNorm();
        const Eigen::Vector2d d_xk = perp(s2) / s2.squaredNorm();
        const Eigen::Vector2d d_xj = -d_xi - d_xk;
        Eigen::MatrixXd row = Eigen::MatrixXd::Zero(1, spec.dim);
        row.block(0, cand.point_i * adim, 1, adim) = (-sign * d_xi).transpose();
        row.block(0, cand.point_j * adim, 1, adim) = (-sign * d_xj).transpose();
        row.block(0, cand.point_k * adim, 1, adim) = (-sign * d_xk).transpose();
        set.contacts.push_back(make_limit(spec, index, cand, std::abs(angle) - cand.max_angle, row));
        break;
      }
    }
  }
  return set;
}

bool project_to_manifold(const SystemSpec& spec, Eigen::VectorXd& x, double tol,
                         int max_iter) {
  if (spec.n_constraints() == 0) return true;
  for (int iter = 0; iter < max_iter; ++iter) {
    const Eigen::VectorXd phi = dynamics::equality_constraints(spec, x);
    if (phi.lpNorm<Eigen::Infinity>() <= tol) return true;
    const Eigen::MatrixXd je = dynamics::equality_jacobian(spec, x);
    Eigen::LLT<Eigen::MatrixXd> llt(je * je.transpose());
    if (llt.info() != Eigen::Success) return false;
    x -= je.transpose() * llt.solve(phi);
  }
  return dynamics::equality_constraints(spec, x).lpNorm<Eigen::Infinity>() <= tol;
}

void project_to_tangent(const SystemSpec& spec, const Eigen::VectorXd& x,
                        Eigen::VectorXd& v) {
  if (spec.n_constraints() == 0) return;
  const Eigen::MatrixXd je = dynamics::equality_jacobian(spec, x);
  Eigen::LLT<Eigen::MatrixXd> llt(je * je.transpose());
  if (llt.info() != Eigen::Success) {
    throw SingularConstraintSystem("project_to_tangent: singular J_E J_E^T");
  }
  v -= je.transpose() * llt.solve(je * v);
}

namespace {

void rotate_body_2d(const SystemSpec& spec, const BodyDescriptor& body, Eigen::VectorXd& x,
                    double angle) {
  const Eigen::Vector2d com = point_of(spec, x, body.points[0]);
  const Eigen::Rotation2Dd rot(angle);
  for (size_t k = 1; k < body.points.size(); ++k) {
    const Eigen::Vector2d tip = point_of(spec, x, body.points[k]);
    x.segment(body.points[k] * 2, 2) = com + rot * (tip - com);
  }
}

void rotate_body_3d(const SystemSpec& spec, const BodyDescriptor& body, Eigen::VectorXd& x,
                    Rng& rng, double amount) {
  Eigen::Vector3d axis(rng.normal(), rng.normal(), rng.normal());
  if (axis.norm() < 1e-9) axis = Eigen::Vector3d::UnitX();
  axis.normalize();
  const double angle = amount * rng.uniform(-M_PI, M_PI);
  const Eigen::AngleAxisd rot(angle, axis);
  const Eigen::Vector3d com = point_of(spec, x, body.points[0]);
  for (size_t k = 1; k < body.points.size(); ++k) {
    const Eigen::Vector3d tip = point_of(spec, x, body.points[k]);
    x.segment(body.points[k] * 3, 3) = com + rot * (tip - com);
  }
}

}  // namespace

State sample_initial_condition(const SystemSpec& spec, const SamplingConfig& sampling,
                               Rng& rng) {
  const int adim = spec.ambient_dim;
  for (int attempt = 0; attempt < sampling.max_rejections; ++attempt) {
    Eigen::VectorXd x = sampling.base_x;
    for (const BodyDescriptor& body : spec.bodies) {
      Eigen::VectorXd offset(adim);
      for (int a = 0; a < adim; ++a) {
        offset[a] = rng.uniform(-sampling.pos_jitter, sampling.pos_jitter);
      }
      for (int point : body.points) x.segment(point * adim, adim) += offset;
      if (body.kind == BodyKind::kExtended2D && sampling.orient_jitter > 0.0) {
        rotate_body_2d(spec, body, x, sampling.orient_jitter * rng.uniform(-M_PI, M_PI));
      } else if (body.kind == BodyKind::kExtended3D && sampling.orient_jitter > 0.0) {
        rotate_body_3d(spec, body, x, rng, sampling.orient_jitter);
      }
    }
    if (sampling.point_jitter > 0.0) {
      for (int i = 0; i < spec.dim; ++i) {
        x[i] += rng.uniform(-sampling.point_jitter, sampling.point_jitter);
      }
    }

    if (!project_to_manifold(spec, x, 1e-12)) continue;
    if (!detect_contacts(spec, x).empty()) continue;

    Eigen::VectorXd v(spec.dim);
    for (int i = 0; i < spec.dim; ++i) v[i] = sampling.vel_sigma * rng.normal();
    project_to_tangent(spec, x, v);
    double max_point_speed = 0.0;
    for (int p = 0; p < spec.n_points(); ++p) {
      max_point_speed = std::max(max_point_speed, v.segment(p * adim, adim).norm());
    }
    if (max_point_speed > sampling.max_speed && max_point_speed > 0.0) {
      v *= sampling.max_speed / max_point_speed;
    }

    State state;
    state.x = std::move(x);
    state.v = std::move(v);
    state.t = 0.0;
    return state;
  }
  throw SamplingExhausted("sample_initial_condition: rejection limit reached");
}

namespace {

void add_rigidity_constraints(SystemSpec& spec, const BodyDescriptor& body) {
  const auto& pts = body.points;
  for (size_t i = 0; i < pts.size(); ++i) {
    for (size_t j = i + 1; j < pts.size(); ++j) {
      EqualityConstraint c;
      c.point_i = pts[i];
      c.point_j = pts[j];
      // com-to-tip offsets are unit; tip-to-tip separations are sqrt(2).
      c.length_sq = (i == 0) ? 1.0 : 2.0;
      spec.equality_constraints.push_back(c);
    }
  }
}

void add_box_walls(SystemSpec& spec, int body, const Eigen::Vector4d& box, int wall_class) {
  const double x0 = box[0], y0 = box[1], x1 = box[2], y1 = box[3];
  const std::pair<Eigen::Vector2d, Eigen::Vector2d> walls[4] = {
      {{x0, 0.0}, {1.0, 0.0}},
      {{x1, 0.0}, {-1.0, 0.0}},
      {{0.0, y0}, {0.0, 1.0}},
      {{0.0, y1}, {0.0, -1.0}},
  };
  for (const auto& [point, normal] : walls) {
    ContactCandidate cand;
    cand.kind = CandidateKind::kSpherePlane;
    cand.contact_class = wall_class;
    cand.body_a = body;
    cand.plane_point = point;
    cand.plane_normal = normal;
    spec.contact_candidates.push_back(cand);
  }
}

}  // namespace

SystemSpec build_bouncing_points(const std::vector<double>& radii, const Eigen::Vector4d& box,
                                 int pair_class, int wall_class, double dt, bool gravity) {
  SystemSpec spec;
  const int n = static_cast<int>(radii.size());
  spec.ambient_dim = 2;
  spec.dim = 2 * n;
  spec.dt = dt;
  spec.potential.gravity = gravity;
  for (int i = 0; i < n; ++i) {
    BodyDescriptor body;
    body.kind = BodyKind::kPointMass;
    body.points = {i};
    body.radius = radii[i];
    spec.bodies.push_back(body);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      ContactCandidate cand;
      cand.kind = CandidateKind::kSpherePair;
      cand.contact_class = pair_class;
      cand.body_a = i;
      cand.body_b = j;
      spec.contact_candidates.push_back(cand);
    }
  }
  for (int i = 0; i < n; ++i) add_box_walls(spec, i, box, wall_class);
  return spec;
}

SystemSpec build_bouncing_disks(const std::vector<double>& radii, const Eigen::Vector4d& box,
                                int pair_class, int wall_class, double dt) {
  SystemSpec spec;
  const int n = static_cast<int>(radii.size());
  spec.ambient_dim = 2;
  spec.dim = 6 * n;
  spec.dt = dt;
  for (int i = 0; i < n; ++i) {
    BodyDescriptor body;
    body.kind = BodyKind::kExtended2D;
    body.points = {3 * i, 3 * i + 1, 3 * i + 2};
    body.radius = radii[i];
    spec.bodies.push_back(body);
    add_rigidity_constraints(spec, body);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      ContactCandidate cand;
      cand.kind = CandidateKind::kSpherePair;
      cand.contact_class = pair_class;
      cand.body_a = i;
      cand.body_b = j;
      spec.contact_candidates.push_back(cand);
    }
  }
  for (int i = 0; i < n; ++i) add_box_walls(spec, i, box, wall_class);
  return spec;
}

SystemSpec build_chain_pendulum(const std::vector<double>& lengths,
                                const Eigen::Vector2d& anchor, double bob_radius,
                                double ground_y, double dt) {
  SystemSpec spec;
  const int n = static_cast<int>(lengths.size());
  spec.ambient_dim = 2;
  spec.dim = 2 * n;
  spec.dt = dt;
  spec.potential.gravity = true;
  for (int i = 0; i < n; ++i) {
    BodyDescriptor body;
    body.kind = BodyKind::kPointMass;
    body.points = {i};
    body.radius = bob_radius;
    spec.bodies.push_back(body);

    EqualityConstraint c;
    c.point_i = i;
    if (i == 0) {
      c.point_j = -1;
      c.anchor = anchor;
    } else {
      c.point_j = i - 1;
    }
    c.length_sq = lengths[i] * lengths[i];
    spec.equality_constraints.push_back(c);
  }
  // Only the lowest bob can touch the ground.
  ContactCandidate cand;
  cand.kind = CandidateKind::kSpherePlane;
  cand.contact_class = 0;
  cand.body_a = n - 1;
  cand.plane_point = Eigen::Vector2d(0.0, ground_y);
  cand.plane_normal = Eigen::Vector2d(0.0, 1.0);
  spec.contact_candidates.push_back(cand);
  return spec;
}

SystemSpec build_gyroscope(double radius, double height, double arm, double wall_x,
                           double dt) {
  SystemSpec spec;
  spec.ambient_dim = 3;
  spec.dim = 12;
  spec.dt = dt;
  spec.potential.gravity = true;
  BodyDescriptor body;
  body.kind = BodyKind::kExtended3D;
  body.points = {0, 1, 2, 3};
  body.radius = radius;
  body.thickness = height;
  spec.bodies.push_back(body);
  add_rigidity_constraints(spec, body);
  // Ball-joint arm: the c.o.m. stays at distance `arm` from the origin.
  EqualityConstraint c;
  c.point_i = 0;
  c.point_j = -1;
  c.anchor = Eigen::Vector3d::Zero();
  c.length_sq = arm * arm;
  spec.equality_constraints.push_back(c);

  ContactCandidate cand;
  cand.kind = CandidateKind::kSpherePlane;
  cand.contact_class = 0;
  cand.body_a = 0;
  cand.plane_point = Eigen::Vector3d(wall_x, 0.0, 0.0);
  cand.plane_normal = Eigen::Vector3d(-1.0, 0.0, 0.0);
  spec.contact_candidates.push_back(cand);
  return spec;
}

SystemSpec build_rope(int n_points, double spacing, double min_ratio, double max_ratio,
                      double max_angle, double dt) {
  SystemSpec spec;
  spec.ambient_dim = 2;
  spec.dim = 2 * n_points;
  spec.dt = dt;
  spec.potential.gravity = true;
  for (int i = 0; i < n_points; ++i) {
    BodyDescriptor body;
    body.kind = BodyKind::kPointMass;
    body.points = {i};
    body.radius = 0.0;
    spec.bodies.push_back(body);
  }
  for (int i = 0; i + 1 < n_points; ++i) {
    spec.potential.springs.push_back({i, i + 1, spacing});

    ContactCandidate stretch;
    stretch.kind = CandidateKind::kStretchLimit;
    stretch.contact_class = 0;
    stretch.point_i = i;
    stretch.point_j = i + 1;
    stretch.rest_length = spacing;
    stretch.min_ratio = min_ratio;
    stretch.max_ratio = max_ratio;
    spec.contact_candidates.push_back(stretch);
  }
  for (int i = 0; i + 2 < n_points; ++i) {
    ContactCandidate bend;
    bend.kind = CandidateKind::kBendLimit;
    bend.contact_class = 0;
    bend.point_i = i;
    bend.point_j = i + 1;
    bend.point_k = i + 2;
    bend.max_angle = max_angle;
    spec.contact_candidates.push_back(bend);
  }
  return spec;
}

SystemSpec build_thrown_disk(double radius, double ground_y, double dt) {
  SystemSpec spec;
  spec.ambient_dim = 2;
  spec.dim = 6;
  spec.dt = dt;
  spec.potential.gravity = true;
  BodyDescriptor body;
  body.kind = BodyKind::kExtended2D;
  body.points = {0, 1, 2};
  body.radius = radius;
  spec.bodies.push_back(body);
  add_rigidity_constraints(spec, body);

  ContactCandidate cand;
  cand.kind = CandidateKind::kSpherePlane;
  cand.contact_class = 0;
  cand.body_a = 0;
  cand.plane_point = Eigen::Vector2d(0.0, ground_y);
  cand.plane_normal = Eigen::Vector2d(0.0, 1.0);
  spec.contact_candidates.push_back(cand);
  return spec;
}

namespace {

using nlohmann::json;

Eigen::VectorXd to_vector(const json& arr) {
  Eigen::VectorXd out(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) out[static_cast<int>(i)] = arr[i].get<double>();
  return out;
}

// Reference configurations the sampler jitters from.
Eigen::VectorXd base_configuration(const std::string& kind, const SystemSpec& spec,
                                   const json& system) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(spec.dim);
  if (kind == "bouncing_points" || kind == "bouncing_disks") {
    const Eigen::VectorXd box = to_vector(system.at("box"));
    const double cx = 0.5 * (box[0] + box[2]);
    const double cy = 0.5 * (box[1] + box[3]);
    for (const BodyDescriptor& body : spec.bodies) {
      x.segment(body.points[0] * 2, 2) = Eigen::Vector2d(cx, cy);
      if (body.kind == BodyKind::kExtended2D) {
        x.segment(body.points[1] * 2, 2) = Eigen::Vector2d(cx + 1.0, cy);
        x.segment(body.points[2] * 2, 2) = Eigen::Vector2d(cx, cy + 1.0);
      }
    }
  } else if (kind == "chain_pendulum") {
    const Eigen::VectorXd anchor = to_vector(system.at("anchor"));
    const auto lengths = system.at("lengths").get<std::vector<double>>();
    double y = anchor[1];
    for (size_t i = 0; i < lengths.size(); ++i) {
      y -= lengths[i];
      x.segment(static_cast<int>(i) * 2, 2) = Eigen::Vector2d(anchor[0], y);
    }
  } else if (kind == "gyroscope") {
    const double arm = system.at("arm").get<double>();
    const Eigen::Vector3d com(0.0, 0.0, arm);
    x.segment(0, 3) = com;
    x.segment(3, 3) = com + Eigen::Vector3d::UnitX();
    x.segment(6, 3) = com + Eigen::Vector3d::UnitY();
    x.segment(9, 3) = com + Eigen::Vector3d::UnitZ();
  } else if (kind == "rope") {
    const double spacing = system.at("spacing").get<double>();
    const int n = system.at("n_points").get<int>();
    for (int i = 0; i < n; ++i) {
      x.segment(i * 2, 2) = Eigen::Vector2d(i * spacing, 0.0);
    }
  }
  return x;
}

}  // namespace

Preset preset_from_json_text(const std::string& text) {
  json doc = json::parse(text);
  Preset preset;
  preset.name = doc.at("name").get<std::string>();
  const double dt = doc.at("dt").get<double>();
  const json& system = doc.at("system");
  const std::string kind = system.at("kind").get<std::string>();

  if (kind == "bouncing_points") {
    preset.spec = build_bouncing_points(system.at("radii").get<std::vector<double>>(),
                                        to_vector(system.at("box")),
                                        system.at("pair_class").get<int>(),
                                        system.at("wall_class").get<int>(), dt,
                                        system.value("gravity", false));
  } else if (kind == "bouncing_disks") {
    preset.spec = build_bouncing_disks(system.at("radii").get<std::vector<double>>(),
                                       to_vector(system.at("box")),
                                       system.at("pair_class").get<int>(),
                                       system.at("wall_class").get<int>(), dt);
  } else if (kind == "chain_pendulum") {
    preset.spec = build_chain_pendulum(system.at("lengths").get<std::vector<double>>(),
                                       to_vector(system.at("anchor")),
                                       system.at("bob_radius").get<double>(),
                                       system.at("ground_y").get<double>(), dt);
  } else if (kind == "gyroscope") {
    preset.spec = build_gyroscope(system.at("radius").get<double>(),
                                  system.at("height").get<double>(),
                                  system.at("arm").get<double>(),
                                  system.at("wall_x").get<double>(), dt);
  } else if (kind == "rope") {
    preset.spec = build_rope(system.at("n_points").get<int>(),
                             system.at("spacing").get<double>(),
                             system.value("min_ratio", 0.8), system.value("max_ratio", 1.2),
                             system.value("max_angle", 0.2), dt);
  } else {
    throw ConfigError("unknown system kind: " + kind);
  }

  const json& truth = doc.at("truth");
  preset.truth.masses = to_vector(truth.at("masses"));
  preset.truth.mu = to_vector(truth.at("mu"));
  preset.truth.e_p = to_vector(truth.at("e_p"));
  preset.truth.potential_constants = to_vector(truth.at("potential_constants"));

  if (preset.truth.masses.size() != preset.spec.n_bodies()) {
    throw ConfigError("preset " + preset.name + ": masses size mismatch");
  }
  if (preset.truth.mu.size() < preset.spec.n_contact_classes() ||
      preset.truth.e_p.size() < preset.spec.n_contact_classes()) {
    throw ConfigError("preset " + preset.name + ": contact class parameters missing");
  }
  if (preset.truth.potential_constants.size() != preset.spec.n_potential_constants()) {
    throw ConfigError("preset " + preset.name + ": potential constants size mismatch");
  }

  const json& sampling = doc.at("sampling");
  preset.sampling.base_x = base_configuration(kind, preset.spec, system);
  preset.sampling.pos_jitter = sampling.at("pos_jitter").get<double>();
  preset.sampling.orient_jitter = sampling.value("orient_jitter", 1.0);
  preset.sampling.point_jitter = sampling.value("point_jitter", 0.0);
  preset.sampling.vel_sigma = sampling.at("vel_sigma").get<double>();
  preset.sampling.max_speed = sampling.value("max_speed", 1e9);
  return preset;
}

Preset load_preset(const std::string& name, const std::string& presets_dir) {
  namespace fs = std::filesystem;
  fs::path path(name);
  if (!fs::exists(path)) path = fs::path(presets_dir) / (name + ".json");
  if (!fs::exists(path)) {
    std::ostringstream msg;
    msg << "preset not found: " << name << "; available:";
    for (const std::string& p : list_presets(presets_dir)) msg << " " << p;
    throw ConfigError(msg.str());
  }
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return preset_from_json_text(buffer.str());
}

std::vector<std::string> list_presets(const std::string& presets_dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> names;
  if (!fs::exists(presets_dir)) return names;
  for (const auto& entry : fs::directory_iterator(presets_dir)) {
    if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace diffsim::systems
