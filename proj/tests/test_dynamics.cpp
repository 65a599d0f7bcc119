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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "diffsim/dynamics.hpp"
#include "diffsim/linalg.hpp"
#include "diffsim/rng.hpp"
#include "diffsim/systems.hpp"
#include "oracles.hpp"

using namespace diffsim;
using namespace diffsim::dynamics;

namespace {

// Single pendulum: one 2D point anchored at the origin by a unit rod, ground
// far below so it never collides.
SystemSpec pendulum_spec() {
  return systems::build_chain_pendulum({1.0}, Eigen::Vector2d(0.0, 0.0), 0.1, -100.0, 0.01);
}

PhysParams pendulum_params(double g = 9.8) {
  PhysParams p;
  p.masses = Eigen::VectorXd::Constant(1, 1.0);
  p.mu = Eigen::VectorXd::Constant(1, 0.0);
  p.e_p = Eigen::VectorXd::Constant(1, 1.0);
  p.potential_constants = Eigen::VectorXd::Constant(1, g);
  return p;
}

SystemSpec free_mass_spec() {
  return systems::build_bouncing_points({0.1}, Eigen::Vector4d(-100, -100, 100, 100), 0, 0,
                                        0.01, true);
}

State make_state(std::initializer_list<double> x, std::initializer_list<double> v) {
  State s;
  s.x = Eigen::VectorXd(static_cast<int>(x.size()));
  int i = 0;
  for (double value : x) s.x[i++] = value;
  s.v = Eigen::VectorXd(static_cast<int>(v.size()));
  i = 0;
  for (double value : v) s.v[i++] = value;
  return s;
}

}  // namespace

TEST_CASE("mass matrix of a single 2D point mass") {
  const SystemSpec spec = free_mass_spec();
  PhysParams params = pendulum_params();
  const Eigen::MatrixXd m = mass_matrix(spec, params);
  CHECK((m - Eigen::MatrixXd::Identity(2, 2)).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("mass matrix stacks per-point blocks") {
  const SystemSpec spec = systems::build_bouncing_points(
      {0.1, 0.1}, Eigen::Vector4d(0, 0, 1, 1), 0, 0, 0.01);
  PhysParams params;
  params.masses = Eigen::Vector2d(2.0, 3.0);
  params.mu = Eigen::VectorXd::Constant(1, 0.0);
  params.e_p = Eigen::VectorXd::Constant(1, 1.0);
  params.potential_constants = Eigen::VectorXd(0);
  const Eigen::MatrixXd m = mass_matrix(spec, params);
  Eigen::VectorXd expected(4);
  expected << 2.0, 2.0, 3.0, 3.0;
  CHECK((m.diagonal() - expected).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(m.lpNorm<Eigen::Infinity>() == 3.0);
}

TEST_CASE("extended disk reproduces the rigid-body rotational energy") {
  const double radius = 0.5;
  const double mass = 2.0;
  const SystemSpec spec = systems::build_thrown_disk(radius, -100.0, 0.01);
  PhysParams params;
  params.masses = Eigen::VectorXd::Constant(1, mass);
  params.mu = Eigen::VectorXd::Constant(1, 0.0);
  params.e_p = Eigen::VectorXd::Constant(1, 1.0);
  params.potential_constants = Eigen::VectorXd::Constant(1, 0.0);

  const Eigen::MatrixXd m = mass_matrix(spec, params);
  CHECK_NOTHROW(cholesky_spd(m));

  // Pure rotation at rate omega about the c.o.m.
  const double omega = 3.0;
  State s = make_state({0.0, 0.0, 1.0, 0.0, 0.0, 1.0}, {0, 0, 0, omega, -omega, 0});
  const double ke = kinetic_energy(spec, params, s);
  const double inertia = 0.5 * mass * radius * radius;  // uniform disk
  CHECK(ke == doctest::Approx(0.5 * inertia * omega * omega).epsilon(1e-12));
}

TEST_CASE("gravity potential and gradient") {
  const SystemSpec spec = free_mass_spec();
  PhysParams params = pendulum_params(9.8);
  const auto [v, grad] = potential_and_gradient(spec, params, (Eigen::VectorXd(2) << 0.0, 2.0).finished());
  CHECK(v == doctest::Approx(19.6).epsilon(1e-14));
  CHECK(grad[0] == 0.0);
  CHECK(grad[1] == doctest::Approx(9.8).epsilon(1e-14));
}

TEST_CASE("spring at rest length contributes nothing") {
  const SystemSpec spec = systems::build_rope(3, 0.1, 0.8, 1.2, 0.2, 0.01);
  PhysParams params;
  params.masses = Eigen::VectorXd::Constant(3, 0.1);
  params.mu = Eigen::VectorXd::Constant(1, 0.0);
  params.e_p = Eigen::VectorXd::Constant(1, 0.0);
  params.potential_constants = (Eigen::VectorXd(2) << 0.0, 50.0).finished();  // g = 0

  Eigen::VectorXd x(6);
  x << 0.0, 0.0, 0.1, 0.0, 0.2, 0.0;
  const auto [v, grad] = potential_and_gradient(spec, params, x);
  CHECK(v == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(grad.lpNorm<Eigen::Infinity>() <= 1e-14);
}

TEST_CASE("rope potential gradient matches finite differences") {
  const SystemSpec spec = systems::build_rope(5, 0.1, 0.8, 1.2, 0.2, 0.01);
  PhysParams params;
  params.masses = Eigen::VectorXd::Constant(5, 0.1);
  params.mu = Eigen::VectorXd::Constant(1, 0.0);
  params.e_p = Eigen::VectorXd::Constant(1, 0.0);
  params.potential_constants = (Eigen::VectorXd(2) << 9.8, 50.0).finished();

  Rng rng(8);
  Eigen::VectorXd x(10);
  for (int i = 0; i < 5; ++i) {
    x[2 * i] = 0.1 * i + 0.01 * rng.normal();
    x[2 * i + 1] = 0.01 * rng.normal();
  }
  const Eigen::VectorXd grad = potential_and_gradient(spec, params, x).second;
  const Eigen::VectorXd fd = test_oracles::fd_grad(
      [&](const Eigen::VectorXd& q) { return potential_and_gradient(spec, params, q).first; },
      x);
  const double scale = grad.lpNorm<Eigen::Infinity>();
  CHECK((grad - fd).lpNorm<Eigen::Infinity>() <= 1e-6 * std::max(1.0, scale));
}

TEST_CASE("pendulum constraint residuals") {
  const SystemSpec spec = pendulum_spec();
  CHECK(equality_constraints(spec, (Eigen::VectorXd(2) << 1.0, 0.0).finished())[0] ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK(equality_constraints(spec, (Eigen::VectorXd(2) << 2.0, 0.0).finished())[0] ==
        doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("extended-body rigidity residuals vanish at the reference placement") {
  const SystemSpec spec = systems::build_thrown_disk(0.3, -100.0, 0.01);
  Eigen::VectorXd x(6);
  x << 0.4, 1.0, 1.4, 1.0, 0.4, 2.0;
  CHECK(equality_constraints(spec, x).lpNorm<Eigen::Infinity>() <= 1e-14);
}

TEST_CASE("pendulum constraint Jacobian") {
  const SystemSpec spec = pendulum_spec();
  const Eigen::MatrixXd je = equality_jacobian(spec, (Eigen::VectorXd(2) << 1.0, 0.0).finished());
  CHECK(je(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(je(0, 1) == doctest::Approx(0.0).epsilon(1e-14));

  // Tangent velocities sit in the null space.
  const Eigen::VectorXd v = (Eigen::VectorXd(2) << 0.0, 1.7).finished();
  CHECK((je * v).lpNorm<Eigen::Infinity>() <= 1e-14);
}

TEST_CASE("constraint Jacobian matches finite differences of the residual") {
  const SystemSpec spec = systems::build_chain_pendulum({1.0, 0.8, 1.2},
                                                        Eigen::Vector2d(0.2, 0.1), 0.1,
                                                        -100.0, 0.01);
  Rng rng(4);
  Eigen::VectorXd x = test_oracles::random_vector(6, rng, 1.0);
  const Eigen::MatrixXd je = equality_jacobian(spec, x);
  for (int k = 0; k < spec.n_constraints(); ++k) {
    const Eigen::VectorXd fd = test_oracles::fd_grad(
        [&](const Eigen::VectorXd& q) { return equality_constraints(spec, q)[k]; }, x);
    CHECK((je.row(k).transpose() - fd).lpNorm<Eigen::Infinity>() <= 1e-6);
  }
}

TEST_CASE("jacobian rate contraction") {
  const SystemSpec spec = pendulum_spec();
  CHECK(jacobian_rate_times_v(spec, (Eigen::VectorXd(2) << 0.0, -1.0).finished(),
                              Eigen::VectorXd::Zero(2))
            .lpNorm<Eigen::Infinity>() == 0.0);

  const double omega = 1.3;
  const Eigen::VectorXd x = (Eigen::VectorXd(2) << 0.0, -1.0).finished();
  const Eigen::VectorXd v = (Eigen::VectorXd(2) << omega, 0.0).finished();
  CHECK(jacobian_rate_times_v(spec, x, v)[0] ==
        doctest::Approx(2.0 * omega * omega).epsilon(1e-14));
}

TEST_CASE("jacobian rate matches a finite-difference directional derivative") {
  const SystemSpec spec = systems::build_chain_pendulum({1.0, 0.8}, Eigen::Vector2d(0, 0),
                                                        0.1, -100.0, 0.01);
  Rng rng(12);
  const Eigen::VectorXd x = test_oracles::random_vector(4, rng, 1.0);
  const Eigen::VectorXd v = test_oracles::random_vector(4, rng, 1.0);
  const Eigen::VectorXd analytic = jacobian_rate_times_v(spec, x, v);
  const double h = 1e-6;
  const Eigen::VectorXd fd =
      (equality_jacobian(spec, x + h * v) * v - equality_jacobian(spec, x - h * v) * v) /
      (2.0 * h);
  CHECK((analytic - fd).lpNorm<Eigen::Infinity>() <=
        1e-5 * std::max(1.0, analytic.lpNorm<Eigen::Infinity>()));
}

TEST_CASE("pendulum field: gravity at the horizontal is fully tangential") {
  const SystemSpec spec = pendulum_spec();
  const PhysParams params = pendulum_params();
  const State s = make_state({1.0, 0.0}, {0.0, 0.0});
  const auto [xdot, vdot] = lagrangian_field(spec, params, s);
  CHECK((xdot - s.v).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(vdot[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(vdot[1] == doctest::Approx(-9.8).epsilon(1e-12));
}

TEST_CASE("pendulum field: centripetal acceleration at the bottom") {
  const SystemSpec spec = pendulum_spec();
  const PhysParams params = pendulum_params();
  const double omega = 2.0;
  const State s = make_state({0.0, -1.0}, {omega, 0.0});
  const auto vdot = lagrangian_field(spec, params, s).second;
  CHECK(vdot[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(vdot[1] == doctest::Approx(omega * omega).epsilon(1e-12));
}

TEST_CASE("unconstrained field reduces to -M^-1 grad V") {
  const SystemSpec spec = free_mass_spec();
  const PhysParams params = pendulum_params();
  const State s = make_state({0.3, 0.8}, {0.1, -0.2});
  const auto vdot = lagrangian_field(spec, params, s).second;
  CHECK(vdot[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(vdot[1] == doctest::Approx(-9.8).epsilon(1e-14));

  const auto hvdot = hamiltonian_field(spec, params, s).second;
  CHECK((vdot - hvdot).lpNorm<Eigen::Infinity>() <= 1e-14);
}

TEST_CASE("Hamiltonian and Lagrangian fields agree on constraint-satisfying states") {
  const SystemSpec cp3 = systems::build_chain_pendulum({1.0, 1.0, 1.0},
                                                       Eigen::Vector2d(0, 0), 0.1, -100.0,
                                                       0.01);
  PhysParams params;
  params.masses = (Eigen::VectorXd(3) << 1.0, 0.65, 0.75).finished();
  params.mu = Eigen::VectorXd::Constant(1, 0.0);
  params.e_p = Eigen::VectorXd::Constant(1, 1.0);
  params.potential_constants = Eigen::VectorXd::Constant(1, 9.8);

  systems::SamplingConfig sampling;
  sampling.base_x = (Eigen::VectorXd(6) << 0, -1, 0, -2, 0, -3).finished();
  sampling.pos_jitter = 0.8;
  sampling.vel_sigma = 1.0;

  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const State s = systems::sample_initial_condition(cp3, sampling, rng);
    const auto [lx, lv] = lagrangian_field(cp3, params, s);
    const auto [hx, hv] = hamiltonian_field(cp3, params, s);
    CHECK((lx - hx).lpNorm<Eigen::Infinity>() <= 1e-8);
    CHECK((lv - hv).lpNorm<Eigen::Infinity>() <= 1e-8);

    // Differentiated constraint: J_E vdot + (D_x(J_E v)) v = 0.
    const Eigen::VectorXd residual =
        equality_jacobian(cp3, s.x) * lv + jacobian_rate_times_v(cp3, s.x, s.v);
    CHECK(residual.lpNorm<Eigen::Infinity>() <= 1e-8);
  }
}

TEST_CASE("Hamiltonian field matches on random gyroscope states") {
  const SystemSpec gyro = systems::build_gyroscope(1.0, 0.4, 1.0, 100.0, 0.01);
  PhysParams params;
  params.masses = Eigen::VectorXd::Constant(1, 1.0);
  params.mu = Eigen::VectorXd::Constant(1, 0.0);
  params.e_p = Eigen::VectorXd::Constant(1, 1.0);
  params.potential_constants = Eigen::VectorXd::Constant(1, 9.8);

  systems::SamplingConfig sampling;
  sampling.base_x = (Eigen::VectorXd(12) << 0, 0, 1, 1, 0, 1, 0, 1, 1, 0, 0, 2).finished();
  sampling.pos_jitter = 0.3;
  sampling.vel_sigma = 2.0;

  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const State s = systems::sample_initial_condition(gyro, sampling, rng);
    const auto [lx, lv] = lagrangian_field(gyro, params, s);
    const auto [hx, hv] = hamiltonian_field(gyro, params, s);
    CHECK((lx - hx).lpNorm<Eigen::Infinity>() <= 1e-7);
    CHECK((lv - hv).lpNorm<Eigen::Infinity>() <= 1e-7 * std::max(1.0, lv.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("rk4 is exact for constant acceleration") {
  const double g = 9.8;
  const FieldFn field = [g](const State& s) {
    return std::make_pair(s.v, (Eigen::VectorXd(2) << 0.0, -g).finished());
  };
  const State s0 = make_state({0.0, 0.0}, {0.0, 0.0});
  const double dt = 0.02;
  const State s1 = rk4_step(field, s0, dt);
  CHECK(s1.x[1] == doctest::Approx(-0.5 * g * dt * dt).epsilon(1e-14));
  CHECK(s1.v[1] == doctest::Approx(-g * dt).epsilon(1e-14));
  CHECK(s1.t == doctest::Approx(dt));
}

TEST_CASE("rk4 one step of a harmonic oscillator vs the closed form") {
  const FieldFn field = [](const State& s) { return std::make_pair(s.v, Eigen::VectorXd(-s.x)); };
  const double dt = 0.1;
  State s0 = make_state({1.0}, {0.0});
  const State s1 = rk4_step(field, s0, dt);
  CHECK(std::abs(s1.x[0] - std::cos(dt)) <= std::pow(dt, 5));
  CHECK(std::abs(s1.v[0] + std::sin(dt)) <= std::pow(dt, 5));
}

TEST_CASE("rk4 with a zero field only advances time") {
  const FieldFn field = [](const State& s) {
    return std::make_pair(Eigen::VectorXd::Zero(s.x.size()), Eigen::VectorXd::Zero(s.x.size()));
  };
  const State s0 = make_state({0.4, -0.7}, {0.0, 0.0});
  const State s1 = rk4_step(field, s0, 0.5);
  CHECK((s1.x - s0.x).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(s1.t == 0.5);
}

TEST_CASE("total energy basics") {
  const SystemSpec spec = free_mass_spec();
  const PhysParams params = pendulum_params();
  CHECK(total_energy(spec, params, make_state({0.0, 0.0}, {0.0, 0.0})) == 0.0);
  CHECK(total_energy(spec, params, make_state({0.0, 0.0}, {3.0, 4.0})) ==
        doctest::Approx(12.5).epsilon(1e-14));
}

TEST_CASE("pendulum conserves energy over an RK4 rollout") {
  const SystemSpec spec = pendulum_spec();
  const PhysParams params = pendulum_params();
  const VectorField field(spec, params);
  const double angle = M_PI / 4.0;
  State s = make_state({std::sin(angle), -std::cos(angle)}, {0.0, 0.0});
  const double e0 = total_energy(spec, params, s);
  for (int i = 0; i < 100; ++i) {
    s = rk4_step([&](const State& q) { return field(q); }, s, 0.01);
  }
  CHECK(std::abs(total_energy(spec, params, s) - e0) <=
        1e-6 * std::max(1.0, std::abs(e0)));
}

TEST_CASE("constraint drift stays small over 500 collision-free steps") {
  const SystemSpec cp3 = systems::build_chain_pendulum({1.0, 1.0, 1.0},
                                                       Eigen::Vector2d(0, 0), 0.1, -100.0,
                                                       0.01);
  PhysParams params;
  params.masses = (Eigen::VectorXd(3) << 1.0, 0.65, 0.75).finished();
  params.mu = Eigen::VectorXd::Constant(1, 0.5);
  params.e_p = Eigen::VectorXd::Constant(1, 0.0);
  params.potential_constants = Eigen::VectorXd::Constant(1, 9.8);
  const VectorField field(cp3, params);

  State s = make_state({0, -1, 0, -2, 0, -3}, {1.0, 0, 1.5, 0, 0.5, 0});
  for (int i = 0; i < 500; ++i) {
    s = rk4_step([&](const State& q) { return field(q); }, s, 0.01);
    CHECK(equality_constraints(cp3, s.x).lpNorm<Eigen::Infinity>() <= 1e-5);
  }
}
