#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "demoguide/demo.hpp"
#include "demoguide/env.hpp"
#include "demoguide/ppo_lfd.hpp"

namespace demoguide {

// One metrics row per epoch. epoch is the 1-based ordinal; guidance is
// active for the first cfg.guidance.cutoff_epoch epochs (0-based index
// < cutoff_epoch).
struct EpochRow {
  int epoch = 0;
  long long env_steps = 0;  // cumulative, strictly increasing
  double mean_episode_reward = 0.0;
  double pi_loss = 0.0;
  double vf_loss = 0.0;
  double approx_kl = 0.0;
  int demo_frames_used = 0;
};

struct RunRecord {
  std::vector<EpochRow> rows;
};

// Observers for debugging artifacts and determinism checks; epoch_index is
// 0-based. The epoch hook fires after each update with the current nets.
using ClusterHook = std::function<void(int epoch_index, const ClusterModel& obs_model,
                                       const ClusterModel& act_model)>;
using EpochHook =
    std::function<void(int epoch_index, const Policy& policy, const Critic& critic)>;

// Single-seed training loop: collect an exploration batch, optionally select
// similar demonstration frames via clustering, apply the merged update, log.
// Collection and guidance draw from separate RNG streams seeded off
// cfg.seed, so a run that never selects demo frames is bit-identical to a
// vanilla run with the same seed.
class Trainer {
 public:
  Trainer(const EnvSpec& env, const TrainConfig& cfg,
          std::optional<DemoDataset> demo);

  RunRecord run();
  EpochRow run_epoch(int epoch_index);  // exposed for stepwise drivers

  const Policy& policy() const { return policy_; }
  const Critic& critic() const { return critic_; }
  const TrainConfig& config() const { return cfg_; }
  const EnvSpec& env() const { return env_; }
  long long env_steps() const { return steps_; }

  void set_cluster_hook(ClusterHook hook) { cluster_hook_ = std::move(hook); }
  void set_epoch_hook(EpochHook hook) { epoch_hook_ = std::move(hook); }

 private:
  EnvSpec env_;
  TrainConfig cfg_;
  std::optional<DemoDataset> demo_;
  Policy policy_;
  Critic critic_;
  OptimizerState pi_opt_;
  OptimizerState vf_opt_;
  Rng rng_;        // network init and collection
  Rng guide_rng_;  // clustering and subsampling only
  long long steps_ = 0;
  ClusterHook cluster_hook_;
  EpochHook epoch_hook_;
};

}  // namespace demoguide
