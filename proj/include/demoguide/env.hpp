#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "demoguide/mlp.hpp"
#include "demoguide/rng.hpp"

namespace demoguide {

// Desk-scale 2-D reaching tasks. A point mass with damped velocity drives
// toward a random target; obstacle_reach adds a circular penalty region
// halfway along the straight line to the target.
enum class EnvName { point_reach, obstacle_reach };

std::string to_string(EnvName name);
EnvName env_name_from_string(const std::string& s);

struct EnvSpec {
  EnvName name = EnvName::point_reach;
  int obs_dim = 6;   // [pos, vel, target - pos]
  int act_dim = 2;
  int horizon = 100;
  double dt = 0.1;
  double action_low = -1.0;
  double action_high = 1.0;

  static EnvSpec make(EnvName name) { return EnvSpec{name}; }
  static EnvSpec make(const std::string& name) {
    return EnvSpec{env_name_from_string(name)};
  }
};

struct Obstacle {
  std::array<double, 2> center{};
  double radius = 0.0;
};

struct EnvState {
  std::array<double, 2> pos{};
  std::array<double, 2> vel{};
  std::array<double, 2> target{};
  std::optional<Obstacle> obstacle;
  int t = 0;
};

Vec observe(const EnvSpec& spec, const EnvState& state);

// Target drawn uniformly (by area) from the annulus 0.5 <= |target| <= 1.5.
std::pair<EnvState, Vec> reset(const EnvSpec& spec, Rng& rng);
std::pair<EnvState, Vec> reset(const EnvSpec& spec, std::uint64_t seed);

struct StepResult {
  EnvState state;
  Vec obs;
  double reward = 0.0;
  bool done = false;
};

// Actions are clipped to the action box before use; non-finite actions are
// rejected with std::invalid_argument.
StepResult step(const EnvSpec& spec, const EnvState& state, const Vec& action);

}  // namespace demoguide
