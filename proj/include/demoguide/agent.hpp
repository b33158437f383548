#pragma once

#include <string>

#include "demoguide/gaussian.hpp"
#include "demoguide/mlp.hpp"
#include "demoguide/rng.hpp"

namespace demoguide {

// Actor: MLP mean head plus log_std tail (see gaussian.hpp).
struct Policy {
  MlpSpec spec;
  Vec params;

  static Policy init(int obs_dim, int act_dim, Rng& rng,
                     std::vector<int> hidden = {64, 64});
  GaussianPolicyOutput forward(const Vec& obs) const {
    return policy_forward(params, spec, obs);
  }
};

// State-value estimator; scalar output.
struct Critic {
  MlpSpec spec;
  Vec params;

  static Critic init(int obs_dim, Rng& rng, std::vector<int> hidden = {64, 64});
  double value(const Vec& obs) const { return forward(params, spec, obs)[0]; }
  Vec value_batch(const Mat& obs) const;
};

// Checkpoint JSON: {"spec": {...}, "values": [...]} per network, wrapped in
// an agent object carrying the environment name.
std::string to_checkpoint_json(const std::string& env_name, const Policy& policy,
                               const Critic& critic);
void from_checkpoint_json(const std::string& text, std::string& env_name,
                          Policy& policy, Critic& critic);

void save_checkpoint(const std::string& path, const std::string& env_name,
                     const Policy& policy, const Critic& critic);
void load_checkpoint(const std::string& path, std::string& env_name,
                     Policy& policy, Critic& critic);

}  // namespace demoguide
