#include "demoguide/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace demoguide {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kSuccessDist = 0.05;
constexpr double kVelDamping = 0.9;
constexpr double kObstacleRadius = 0.2;
constexpr double kObstaclePenalty = 1.0;

double dist2d(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

std::string to_string(EnvName name) {
  switch (name) {
    case EnvName::point_reach: return "point_reach";
    case EnvName::obstacle_reach: return "obstacle_reach";
  }
  throw std::invalid_argument("unknown EnvName");
}

EnvName env_name_from_string(const std::string& s) {
  if (s == "point_reach") return EnvName::point_reach;
  if (s == "obstacle_reach") return EnvName::obstacle_reach;
  throw std::invalid_argument("unknown environment name: " + s);
}

Vec observe(const EnvSpec& spec, const EnvState& state) {
  (void)spec;
  return {state.pos[0],
          state.pos[1],
          state.vel[0],
          state.vel[1],
          state.target[0] - state.pos[0],
          state.target[1] - state.pos[1]};
}

std::pair<EnvState, Vec> reset(const EnvSpec& spec, Rng& rng) {
  EnvState state;
  // area-uniform draw over the annulus: r^2 uniform in [0.25, 2.25]
  const double r = std::sqrt(rng.uniform(0.25, 2.25));
  const double theta = rng.uniform(0.0, kTwoPi);
  state.target = {r * std::cos(theta), r * std::sin(theta)};
  if (spec.name == EnvName::obstacle_reach) {
    state.obstacle = Obstacle{{0.5 * state.target[0], 0.5 * state.target[1]},
                              kObstacleRadius};
  }
  state.t = 0;
  return {state, observe(spec, state)};
}

std::pair<EnvState, Vec> reset(const EnvSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  return reset(spec, rng);
}

StepResult step(const EnvSpec& spec, const EnvState& state, const Vec& action) {
  if (static_cast<int>(action.size()) != spec.act_dim) {
    throw std::invalid_argument("step: action dimension mismatch");
  }
  for (double a : action) {
    if (!std::isfinite(a)) throw std::invalid_argument("step: non-finite action");
  }

  StepResult out;
  out.state = state;
  for (int i = 0; i < 2; ++i) {
    const double a = std::clamp(action[i], spec.action_low, spec.action_high);
    out.state.vel[i] = kVelDamping * state.vel[i] + a * spec.dt;
    out.state.pos[i] = state.pos[i] + out.state.vel[i] * spec.dt;
  }
  out.state.t = state.t + 1;

  const double dist = dist2d(out.state.pos, out.state.target);
  out.reward = -dist;
  if (out.state.obstacle &&
      dist2d(out.state.pos, out.state.obstacle->center) < out.state.obstacle->radius) {
    out.reward -= kObstaclePenalty;
  }
  out.done = out.state.t >= spec.horizon || dist < kSuccessDist;
  out.obs = observe(spec, out.state);
  return out;
}

}  // namespace demoguide
