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

#ifndef DIFFSIM_ERRORS_HPP_
#define DIFFSIM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace diffsim {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(const std::string& what) : Error(what) {}
};

class ShapeMismatch : public Error {
 public:
  explicit ShapeMismatch(const std::string& what) : Error(what) {}
};

class SingularConstraintSystem : public Error {
 public:
  explicit SingularConstraintSystem(const std::string& what) : Error(what) {}
};

// Thrown when the cone-QP solver hits its iteration cap. Carries the final
// fixed-point residual so callers can decide whether to accept the iterate.
class SolverNotConverged : public Error {
 public:
  SolverNotConverged(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_ = 0.0;
};

class DegenerateActiveSet : public Error {
 public:
  explicit DegenerateActiveSet(const std::string& what) : Error(what) {}
};

class SamplingExhausted : public Error {
 public:
  explicit SamplingExhausted(const std::string& what) : Error(what) {}
};

class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, int step) : Error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_ = 0;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace diffsim

#endif  // DIFFSIM_ERRORS_HPP_
