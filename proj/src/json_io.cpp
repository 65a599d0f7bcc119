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

#include "diffsim/json_io.hpp"

#include <cstdint>
#include <fstream>

#include "diffsim/errors.hpp"

namespace diffsim::json_io {

json to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
  return v;
}

namespace {

const char* body_kind_name(BodyKind kind) {
  switch (kind) {
    case BodyKind::kPointMass: return "point_mass";
    case BodyKind::kExtended2D: return "extended_2d";
    case BodyKind::kExtended3D: return "extended_3d";
  }
  return "point_mass";
}

BodyKind body_kind_from(const std::string& name) {
  if (name == "point_mass") return BodyKind::kPointMass;
  if (name == "extended_2d") return BodyKind::kExtended2D;
  if (name == "extended_3d") return BodyKind::kExtended3D;
  throw ConfigError("unknown body kind: " + name);
}

const char* candidate_kind_name(CandidateKind kind) {
  switch (kind) {
    case CandidateKind::kSpherePair: return "sphere_pair";
    case CandidateKind::kSpherePlane: return "sphere_plane";
    case CandidateKind::kStretchLimit: return "stretch_limit";
    case CandidateKind::kBendLimit: return "bend_limit";
  }
  return "sphere_pair";
}

CandidateKind candidate_kind_from(const std::string& name) {
  if (name == "sphere_pair") return CandidateKind::kSpherePair;
  if (name == "sphere_plane") return CandidateKind::kSpherePlane;
  if (name == "stretch_limit") return CandidateKind::kStretchLimit;
  if (name == "bend_limit") return CandidateKind::kBendLimit;
  throw ConfigError("unknown contact candidate kind: " + name);
}

}  // namespace

json to_json(const SystemSpec& spec) {
  json j;
  j["dim"] = spec.dim;
  j["ambient_dim"] = spec.ambient_dim;
  j["dt"] = spec.dt;
  j["bodies"] = json::array();
  for (const auto& body : spec.bodies) {
    json b;
    b["kind"] = body_kind_name(body.kind);
    b["points"] = body.points;
    b["radius"] = body.radius;
    b["thickness"] = body.thickness;
    j["bodies"].push_back(b);
  }
  j["equality_constraints"] = json::array();
  for (const auto& c : spec.equality_constraints) {
    json e;
    e["point_i"] = c.point_i;
    e["point_j"] = c.point_j;
    if (c.point_j < 0) e["anchor"] = to_json(c.anchor);
    e["length_sq"] = c.length_sq;
    j["equality_constraints"].push_back(e);
  }
  j["contact_candidates"] = json::array();
  for (const auto& c : spec.contact_candidates) {
    json e;
    e["kind"] = candidate_kind_name(c.kind);
    e["contact_class"] = c.contact_class;
    switch (c.kind) {
      case CandidateKind::kSpherePair:
        e["body_a"] = c.body_a;
        e["body_b"] = c.body_b;
        break;
      case CandidateKind::kSpherePlane:
        e["body_a"] = c.body_a;
        e["plane_point"] = to_json(c.plane_point);
        e["plane_normal"] = to_json(c.plane_normal);
        break;
      case CandidateKind::kStretchLimit:
        e["point_i"] = c.point_i;
        e["point_j"] = c.point_j;
        e["rest_length"] = c.rest_length;
        e["min_ratio"] = c.min_ratio;
        e["max_ratio"] = c.max_ratio;
        break;
      case CandidateKind::kBendLimit:
        e["point_i"] = c.point_i;
        e["point_j"] = c.point_j;
        e["point_k"] = c.point_k;
        e["max_angle"] = c.max_angle;
        break;
    }
    j["contact_candidates"].push_back(e);
  }
  json pot;
  pot["gravity"] = spec.potential.gravity;
  pot["springs"] = json::array();
  for (const auto& s : spec.potential.springs) {
    pot["springs"].push_back({{"point_i", s.point_i},
                              {"point_j", s.point_j},
                              {"rest_length", s.rest_length}});
  }
  j["potential"] = pot;
  return j;
}

SystemSpec spec_from_json(const json& j) {
  SystemSpec spec;
  spec.dim = j.at("dim").get<int>();
  spec.ambient_dim = j.at("ambient_dim").get<int>();
  spec.dt = j.at("dt").get<double>();
  for (const auto& b : j.at("bodies")) {
    BodyDescriptor body;
    body.kind = body_kind_from(b.at("kind").get<std::string>());
    body.points = b.at("points").get<std::vector<int>>();
    body.radius = b.at("radius").get<double>();
    body.thickness = b.at("thickness").get<double>();
    spec.bodies.push_back(body);
  }
  for (const auto& e : j.at("equality_constraints")) {
    EqualityConstraint c;
    c.point_i = e.at("point_i").get<int>();
    c.point_j = e.at("point_j").get<int>();
    if (c.point_j < 0) c.anchor = vector_from_json(e.at("anchor"));
    c.length_sq = e.at("length_sq").get<double>();
    spec.equality_constraints.push_back(c);
  }
  for (const auto& e : j.at("contact_candidates")) {
    ContactCandidate c;
    c.kind = candidate_kind_from(e.at("kind").get<std::string>());
    c.contact_class = e.at("contact_class").get<int>();
    switch (c.kind) {
      case CandidateKind::kSpherePair:
        c.body_a = e.at("body_a").get<int>();
        c.body_b = e.at("body_b").get<int>();
        break;
      case CandidateKind::kSpherePlane:
        c.body_a = e.at("body_a").get<int>();
        c.plane_point = vector_from_json(e.at("plane_point"));
        c.plane_normal = vector_from_json(e.at("plane_normal"));
        break;
      case CandidateKind::kStretchLimit:
        c.point_i = e.at("point_i").get<int>();
        c.point_j = e.at("point_j").get<int>();
        c.rest_length = e.at("rest_length").get<double>();
        c.min_ratio = e.at("min_ratio").get<double>();
        c.max_ratio = e.at("max_ratio").get<double>();
        break;
      case CandidateKind::kBendLimit:
        c.point_i = e.at("point_i").get<int>();
        c.point_j = e.at("point_j").get<int>();
        c.point_k = e.at("point_k").get<int>();
        c.max_angle = e.at("max_angle").get<double>();
        break;
    }
    spec.contact_candidates.push_back(c);
  }
  const json& pot = j.at("potential");
  spec.potential.gravity = pot.at("gravity").get<bool>();
  for (const auto& s : pot.at("springs")) {
    spec.potential.springs.push_back({s.at("point_i").get<int>(), s.at("point_j").get<int>(),
                                      s.at("rest_length").get<double>()});
  }
  return spec;
}

json to_json(const PhysParams& params) {
  json j;
  j["masses"] = to_json(params.masses);
  j["mu"] = to_json(params.mu);
  j["e_p"] = to_json(params.e_p);
  j["potential_constants"] = to_json(params.potential_constants);
  return j;
}

PhysParams params_from_json(const json& j) {
  PhysParams params;
  params.masses = vector_from_json(j.at("masses"));
  params.mu = vector_from_json(j.at("mu"));
  params.e_p = vector_from_json(j.at("e_p"));
  params.potential_constants = vector_from_json(j.at("potential_constants"));
  return params;
}

json to_json(const State& state) {
  json j;
  j["t"] = state.t;
  j["x"] = to_json(state.x);
  j["v"] = to_json(state.v);
  return j;
}

State state_from_json(const json& j) {
  State s;
  s.t = j.at("t").get<double>();
  s.x = vector_from_json(j.at("x"));
  s.v = vector_from_json(j.at("v"));
  return s;
}

json to_json(const sim::SimOptions& options) {
  json j;
  j["dt"] = options.dt;
  j["n_steps"] = options.n_steps;
  j["mode"] = options.mode == dynamics::DynamicsMode::kLagrangian ? "lagrangian" : "hamiltonian";
  j["epsilon"] = options.epsilon;
  j["k_steps"] = options.k_steps;
  j["solver_tol"] = options.solver_tol;
  j["solver_max_iter"] = options.solver_max_iter;
  return j;
}

sim::SimOptions options_from_json(const json& j) {
  sim::SimOptions o;
  o.dt = j.at("dt").get<double>();
  o.n_steps = j.at("n_steps").get<int>();
  o.mode = j.at("mode").get<std::string>() == "hamiltonian"
               ? dynamics::DynamicsMode::kHamiltonian
               : dynamics::DynamicsMode::kLagrangian;
  o.epsilon = j.at("epsilon").get<double>();
  o.k_steps = j.at("k_steps").get<int>();
  o.solver_tol = j.at("solver_tol").get<double>();
  o.solver_max_iter = j.at("solver_max_iter").get<int>();
  return o;
}

json to_json(const Trajectory& traj) {
  json j;
  j["schema_version"] = 1;
  j["seed"] = traj.meta.seed;
  j["spec_hash"] = traj.meta.spec_hash;
  j["states"] = json::array();
  for (const auto& s : traj.states) j["states"].push_back(to_json(s));
  j["contact_flags"] = traj.contact_flags;
  return j;
}

json to_json(const sim::Dataset& dataset) {
  json j;
  j["schema_version"] = 1;
  j["preset"] = dataset.preset;
  j["spec_hash"] = dataset.spec_hash;
  j["seed"] = dataset.seed;
  j["t_chunk"] = dataset.t_chunk;
  j["options"] = to_json(dataset.options);
  j["chunks"] = json::array();
  for (const auto& chunk : dataset.chunks) {
    json c;
    c["t0"] = chunk.t0;
    c["has_collision"] = chunk.has_collision;
    c["states"] = json::array();
    for (const auto& s : chunk.states) c["states"].push_back(to_json(s));
    j["chunks"].push_back(c);
  }
  return j;
}

sim::Dataset dataset_from_json(const json& j) {
  sim::Dataset d;
  d.preset = j.at("preset").get<std::string>();
  d.spec_hash = j.at("spec_hash").get<std::string>();
  d.seed = j.at("seed").get<std::uint64_t>();
  d.t_chunk = j.at("t_chunk").get<int>();
  d.options = options_from_json(j.at("options"));
  for (const auto& c : j.at("chunks")) {
    sim::DatasetChunk chunk;
    chunk.t0 = c.at("t0").get<double>();
    chunk.has_collision = c.at("has_collision").get<bool>();
    for (const auto& s : c.at("states")) chunk.states.push_back(state_from_json(s));
    d.chunks.push_back(std::move(chunk));
  }
  return d;
}

json to_json(const learn::FitReport& report) {
  json j;
  j["schema_version"] = 1;
  j["final_loss"] = report.final_loss;
  j["epochs_run"] = report.epochs_run;
  j["theta"] = to_json(report.theta);
  j["decoded"] = to_json(report.decoded);
  j["mass_ratios"] = to_json(report.mass_ratios);
  j["losses"] = report.losses;
  j["rel_errors"] = report.rel_errors;
  return j;
}

learn::FitReport fit_report_from_json(const json& j) {
  learn::FitReport r;
  r.final_loss = j.at("final_loss").get<double>();
  r.epochs_run = j.at("epochs_run").get<int>();
  r.theta = vector_from_json(j.at("theta"));
  r.decoded = params_from_json(j.at("decoded"));
  r.mass_ratios = vector_from_json(j.at("mass_ratios"));
  r.losses = j.at("losses").get<std::vector<double>>();
  r.rel_errors = j.at("rel_errors").get<std::vector<double>>();
  return r;
}

std::string spec_hash(const SystemSpec& spec) {
  const std::string dump = to_json(spec).dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : dump) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a:%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

void write_file(const std::string& path, const json& doc) {
  write_file(path, doc.dump(2) + "\n");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << text;
}

json read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open for reading: " + path);
  return json::parse(in);
}

}  // namespace diffsim::json_io
