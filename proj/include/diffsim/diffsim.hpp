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

#ifndef DIFFSIM_DIFFSIM_HPP_
#define DIFFSIM_DIFFSIM_HPP_

#include "diffsim/contact.hpp"
#include "diffsim/dynamics.hpp"
#include "diffsim/errors.hpp"
#include "diffsim/json_io.hpp"
#include "diffsim/learn.hpp"
#include "diffsim/linalg.hpp"
#include "diffsim/plan.hpp"
#include "diffsim/rng.hpp"
#include "diffsim/sim.hpp"
#include "diffsim/socp.hpp"
#include "diffsim/systems.hpp"
#include "diffsim/types.hpp"

#endif  // DIFFSIM_DIFFSIM_HPP_
