#include "demoguide/rollout.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

namespace demoguide {

std::size_t Collection::frame_count() const {
  std::size_t n = 0;
  for (const Trajectory& t : trajectories) n += t.frames.size();
  return n;
}

Collection collect(const EnvSpec& env, const Policy& policy, const Critic& critic,
                   int steps_per_epoch, Rng& rng) {
  (void)critic;  // bootstrap values are resolved in build_advantage_batch
  if (steps_per_epoch < env.horizon) {
    throw std::invalid_argument("collect: steps_per_epoch must be >= horizon");
  }

  Collection out;
  double completed_reward_sum = 0.0;

  auto [state, obs] = reset(env, rng);
  Trajectory traj;
  double episode_reward = 0.0;
  for (int step_i = 0; step_i < steps_per_epoch; ++step_i) {
    const GaussianPolicyOutput dist = policy.forward(obs);
    for (double m : dist.mean) {
      if (!std::isfinite(m)) {
        throw std::runtime_error("collect: policy produced non-finite mean at step " +
                                 std::to_string(step_i));
      }
    }
    const Vec action = sample_action(dist, rng);
    const double logp = log_prob(dist, action);
    StepResult res = step(env, state, action);

    traj.frames.push_back(Frame{obs, res.obs, res.reward, action, res.done, logp});
    episode_reward += res.reward;
    state = res.state;
    obs = res.obs;

    if (res.done) {
      out.trajectories.push_back(std::move(traj));
      traj = Trajectory{};
      out.episodes_completed += 1;
      completed_reward_sum += episode_reward;
      episode_reward = 0.0;
      if (step_i + 1 < steps_per_epoch) {
        std::tie(state, obs) = reset(env, rng);
      }
    }
  }
  if (!traj.frames.empty()) out.trajectories.push_back(std::move(traj));

  if (out.episodes_completed > 0) {
    out.mean_episode_reward = completed_reward_sum / out.episodes_completed;
  } else {
    out.mean_episode_reward = episode_reward;  // lone truncated episode
  }
  return out;
}

Vec gae(const Vec& rewards, const Vec& values, double last_value,
        const std::vector<bool>& dones, double gamma, double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n || dones.size() != n) {
    throw std::invalid_argument("gae: length mismatch");
  }
  Vec adv(n, 0.0);
  double running = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const double nonterminal = dones[i] ? 0.0 : 1.0;
    const double next_value = (i + 1 == n) ? last_value : values[i + 1];
    const double delta = rewards[i] + gamma * next_value * nonterminal - values[i];
    running = delta + gamma * lambda * nonterminal * running;
    adv[i] = running;
  }
  return adv;
}

Vec returns_to_go(const Vec& rewards, const std::vector<bool>& dones,
                  double last_value, double gamma) {
  const std::size_t n = rewards.size();
  if (dones.size() != n) throw std::invalid_argument("returns_to_go: length mismatch");
  Vec ret(n, 0.0);
  double running = last_value;
  for (std::size_t i = n; i-- > 0;) {
    const double nonterminal = dones[i] ? 0.0 : 1.0;
    running = rewards[i] + gamma * nonterminal * running;
    ret[i] = running;
  }
  return ret;
}

Vec normalize_advantages(const Vec& adv, double& mean_out, double& std_out) {
  const std::size_t n = adv.size();
  if (n < 2) throw std::invalid_argument("normalize_advantages: need >= 2 entries");
  double mean = 0.0;
  for (double a : adv) mean += a;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double a : adv) var += (a - mean) * (a - mean);
  const double std_dev = std::sqrt(var / static_cast<double>(n));
  Vec out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (adv[i] - mean) / (std_dev + 1e-8);
  mean_out = mean;
  std_out = std_dev;
  return out;
}

Vec normalize_advantages(const Vec& adv) {
  double mean = 0.0, std_dev = 1.0;
  return normalize_advantages(adv, mean, std_dev);
}

AdvantageBatch build_advantage_batch(const Collection& collection,
                                     const Critic& critic, double gamma,
                                     double lambda) {
  AdvantageBatch batch;
  batch.frames.reserve(collection.frame_count());
  for (const Trajectory& t : collection.trajectories) {
    batch.frames.insert(batch.frames.end(), t.frames.begin(), t.frames.end());
  }
  if (batch.frames.empty()) throw std::invalid_argument("build_advantage_batch: empty");

  const std::size_t n = batch.frames.size();
  Mat obs(n);
  Vec rewards(n);
  std::vector<bool> dones(n);
  for (std::size_t i = 0; i < n; ++i) {
    obs[i] = batch.frames[i].s;
    rewards[i] = batch.frames[i].r;
    dones[i] = batch.frames[i].done;
  }
  const Vec values = critic.value_batch(obs);
  const double last_value =
      batch.frames.back().done ? 0.0 : critic.value(batch.frames.back().s_next);

  batch.adv = normalize_advantages(
      gae(rewards, values, last_value, dones, gamma, lambda),
      batch.adv_mean, batch.adv_std);
  batch.ret = returns_to_go(rewards, dones, last_value, gamma);
  return batch;
}

}  // namespace demoguide
