#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "demoguide/env.hpp"

using namespace demoguide;

namespace {

EnvState state_at(std::array<double, 2> pos, std::array<double, 2> vel,
                  std::array<double, 2> target, int t = 0) {
  EnvState s;
  s.pos = pos;
  s.vel = vel;
  s.target = target;
  s.t = t;
  return s;
}

double dist(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

}  // namespace

TEST_CASE("environment names round-trip, unknown rejected") {
  CHECK(env_name_from_string("point_reach") == EnvName::point_reach);
  CHECK(env_name_from_string("obstacle_reach") == EnvName::obstacle_reach);
  CHECK(to_string(EnvName::point_reach) == "point_reach");
  CHECK_THROWS_AS(env_name_from_string("hopper"), std::invalid_argument);
}

TEST_CASE("reset is deterministic per seed and zeroes pos/vel") {
  const EnvSpec spec = EnvSpec::make(EnvName::point_reach);
  auto [s1, o1] = reset(spec, 77);
  auto [s2, o2] = reset(spec, 77);
  CHECK(s1.target[0] == s2.target[0]);
  CHECK(s1.target[1] == s2.target[1]);
  CHECK(s1.pos[0] == 0.0);
  CHECK(s1.pos[1] == 0.0);
  CHECK(s1.vel[0] == 0.0);
  CHECK(s1.vel[1] == 0.0);
  CHECK(s1.t == 0);

  // observation layout [pos, vel, target - pos]
  REQUIRE(o1.size() == 6);
  for (int i = 0; i < 4; ++i) CHECK(o1[static_cast<std::size_t>(i)] == 0.0);
  CHECK(o1[4] == s1.target[0]);
  CHECK(o1[5] == s1.target[1]);
}

TEST_CASE("targets stay inside the annulus over many resets") {
  const EnvSpec spec = EnvSpec::make(EnvName::point_reach);
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    auto [s, obs] = reset(spec, rng);
    const double r = std::hypot(s.target[0], s.target[1]);
    CHECK(r >= 0.5);
    CHECK(r <= 1.5);
  }
}

TEST_CASE("obstacle sits halfway to the target with radius 0.2") {
  const EnvSpec spec = EnvSpec::make(EnvName::obstacle_reach);
  auto [s, obs] = reset(spec, 12);
  REQUIRE(s.obstacle.has_value());
  CHECK(s.obstacle->center[0] == doctest::Approx(s.target[0] / 2).epsilon(1e-12));
  CHECK(s.obstacle->center[1] == doctest::Approx(s.target[1] / 2).epsilon(1e-12));
  CHECK(s.obstacle->radius == 0.2);

  const EnvSpec plain = EnvSpec::make(EnvName::point_reach);
  auto [sp, op] = reset(plain, 12);
  CHECK_FALSE(sp.obstacle.has_value());
}

TEST_CASE("zero action from rest leaves the position, reward is -|target|") {
  const EnvSpec spec = EnvSpec::make(EnvName::point_reach);
  const EnvState s = state_at({0, 0}, {0, 0}, {0.8, -0.6});
  const StepResult res = step(spec, s, {0.0, 0.0});
  CHECK(res.state.pos[0] == 0.0);
  CHECK(res.state.pos[1] == 0.0);
  CHECK(res.reward == doctest::Approx(-1.0).epsilon(1e-12));  // |(0.8,-0.6)| = 1
}

TEST_CASE("hand-evaluated dynamics step") {
  const EnvSpec spec = EnvSpec::make(EnvName::point_reach);
  const EnvState s = state_at({0, 0}, {0, 0}, {1.0, 0.0});
  const StepResult res = step(spec, s, {1.0, 0.0});
  CHECK(res.state.vel[0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(res.state.pos[0] == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(res.reward == doctest::Approx(-0.99).epsilon(1e-12));
  CHECK(res.state.t == 1);
  CHECK_FALSE(res.done);
}

TEST_CASE("actions clip to the box") {
  const EnvSpec spec = EnvSpec::make(EnvName::point_reach);
  const EnvState s = state_at({0.1, -0.2}, {0.05, 0.0}, {1.0, 1.0});
  const StepResult big = step(spec, s, {5.0, -3.0});
  const StepResult box = step(spec, s, {1.0, -1.0});
  CHECK(big.state.pos[0] == box.state.pos[0]);
  CHECK(big.state.pos[1] == box.state.pos[1]);
  CHECK(big.reward == box.reward);
}

TEST_CASE("obstacle contact subtracts exactly one") {
  const EnvSpec spec = EnvSpec::make(EnvName::obstacle_reach);
  EnvState s = state_at({0.45, 0.0}, {0.0, 0.0}, {1.0, 0.0});
  s.obstacle = Obstacle{{0.5, 0.0}, 0.2};
  const StepResult res = step(spec, s, {1.0, 0.0});
  // pos' = (0.46, 0): inside the obstacle, 0.54 from the target
  CHECK(dist(res.state.pos, {0.46, 0.0}) < 1e-15);
  CHECK(res.reward == doctest::Approx(-0.54 - 1.0).epsilon(1e-12));
}

TEST_CASE("episodes end at the horizon") {
  const EnvSpec spec = EnvSpec::make(EnvName::point_reach);
  EnvState s = state_at({0, 0}, {0, 0}, {1.0, 0.0}, spec.horizon - 1);
  const StepResult res = step(spec, s, {0.0, 0.0});
  CHECK(res.done);
  CHECK(res.state.t == spec.horizon);
}

TEST_CASE("reaching within 0.05 of the target ends the episode early") {
  const EnvSpec spec = EnvSpec::make(EnvName::point_reach);
  const EnvState s = state_at({0.949, 0.0}, {0.0, 0.0}, {1.0, 0.0});
  const StepResult res = step(spec, s, {1.0, 0.0});
  CHECK(dist(res.state.pos, {0.959, 0.0}) < 1e-15);
  CHECK(res.done);
}

TEST_CASE("reward never exceeds zero under random play") {
  const EnvSpec spec = EnvSpec::make(EnvName::obstacle_reach);
  Rng rng(21);
  auto [s, obs] = reset(spec, rng);
  EnvState state = s;
  for (int i = 0; i < 300; ++i) {
    const StepResult res =
        step(spec, state, {rng.uniform(-2, 2), rng.uniform(-2, 2)});
    CHECK(res.reward <= 0.0);
    state = res.done ? reset(spec, rng).first : res.state;
  }
}

TEST_CASE("every action sequence terminates by the horizon") {
  const EnvSpec spec = EnvSpec::make(EnvName::point_reach);
  Rng rng(5);
  auto [state, obs] = reset(spec, rng);
  bool done = false;
  int steps = 0;
  while (!done) {
    const StepResult res = step(spec, state, {1.0, 1.0});
    state = res.state;
    done = res.done;
    ++steps;
    REQUIRE(steps <= spec.horizon);
  }
  CHECK(steps <= spec.horizon);
}

TEST_CASE("replaying a recorded action sequence reproduces rewards bitwise") {
  const EnvSpec spec = EnvSpec::make(EnvName::point_reach);
  Rng rng(99);
  std::vector<Vec> actions;
  std::vector<double> rewards;
  {
    auto [state, obs] = reset(spec, 4242);
    for (int i = 0; i < 50; ++i) {
      actions.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
      const StepResult res = step(spec, state, actions.back());
      rewards.push_back(res.reward);
      if (res.done) break;
      state = res.state;
    }
  }
  auto [state, obs] = reset(spec, 4242);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const StepResult res = step(spec, state, actions[i]);
    CHECK(res.reward == rewards[i]);
    if (res.done) break;
    state = res.state;
  }
}

TEST_CASE("non-finite actions are rejected") {
  const EnvSpec spec = EnvSpec::make(EnvName::point_reach);
  const EnvState s = state_at({0, 0}, {0, 0}, {1.0, 0.0});
  CHECK_THROWS_AS(
      step(spec, s, {std::numeric_limits<double>::quiet_NaN(), 0.0}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      step(spec, s, {std::numeric_limits<double>::infinity(), 0.0}),
      std::invalid_argument);
}
