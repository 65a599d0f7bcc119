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

#ifndef DIFFSIM_JSON_IO_HPP_
#define DIFFSIM_JSON_IO_HPP_

#include <string>

#include <json.hpp>

#include "diffsim/learn.hpp"
#include "diffsim/sim.hpp"
#include "diffsim/types.hpp"

namespace diffsim::json_io {

using json = nlohmann::ordered_json;

json to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const json& j);

json to_json(const SystemSpec& spec);
SystemSpec spec_from_json(const json& j);

json to_json(const PhysParams& params);
PhysParams params_from_json(const json& j);

json to_json(const State& state);
State state_from_json(const json& j);

json to_json(const sim::SimOptions& options);
sim::SimOptions options_from_json(const json& j);

json to_json(const Trajectory& traj);

json to_json(const sim::Dataset& dataset);
sim::Dataset dataset_from_json(const json& j);

json to_json(const learn::FitReport& report);
learn::FitReport fit_report_from_json(const json& j);

// FNV-1a over the canonical serialization; identifies the system a dataset
// was generated from.
std::string spec_hash(const SystemSpec& spec);

void write_file(const std::string& path, const json& doc);
void write_file(const std::string& path, const std::string& text);
json read_file(const std::string& path);

}  // namespace diffsim::json_io

#endif  // DIFFSIM_JSON_IO_HPP_
