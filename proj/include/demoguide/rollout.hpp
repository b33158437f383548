#pragma once

#include <vector>

#include "demoguide/agent.hpp"
#include "demoguide/env.hpp"

namespace demoguide {

// One transition quadruple plus bookkeeping for the learner. Actions are
// stored pre-clip so logp_old can be recomputed exactly.
struct Frame {
  Vec s;
  Vec s_next;
  double r = 0.0;
  Vec a;
  bool done = false;
  double logp_old = 0.0;
};

struct Trajectory {
  std::vector<Frame> frames;
};

struct AdvantageBatch {
  std::vector<Frame> frames;
  Vec adv;
  Vec ret;
  // Statistics of the raw advantages before normalization; consumers that mix
  // in externally computed advantages apply the same affine transform so both
  // terms share one scale. Defaults leave foreign advantages untouched.
  double adv_mean = 0.0;
  double adv_std = 1.0;
};

struct Collection {
  std::vector<Trajectory> trajectories;
  int episodes_completed = 0;
  double mean_episode_reward = 0.0;  // over episodes that finished this epoch

  std::size_t frame_count() const;
};

// Runs the policy for exactly steps_per_epoch environment steps, starting a
// fresh episode whenever one terminates. A truncated final episode keeps
// done=false on its last frame so the advantage computation bootstraps it.
Collection collect(const EnvSpec& env, const Policy& policy, const Critic& critic,
                   int steps_per_epoch, Rng& rng);

// Backward-recursion GAE: delta_t = r_t + gamma*V(s_{t+1})*(1-done_t) - V(s_t),
// adv_t = delta_t + gamma*lambda*(1-done_t)*adv_{t+1}. last_value bootstraps
// a truncated batch tail.
Vec gae(const Vec& rewards, const Vec& values, double last_value,
        const std::vector<bool>& dones, double gamma, double lambda);

Vec returns_to_go(const Vec& rewards, const std::vector<bool>& dones,
                  double last_value, double gamma);

// (adv - mean) / (std + 1e-8), population std
Vec normalize_advantages(const Vec& adv);
Vec normalize_advantages(const Vec& adv, double& mean_out, double& std_out);

// Flattens a collection, evaluates the critic, and fills normalized
// advantages and returns-to-go.
AdvantageBatch build_advantage_batch(const Collection& collection,
                                     const Critic& critic, double gamma,
                                     double lambda);

}  // namespace demoguide
