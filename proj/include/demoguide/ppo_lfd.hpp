#pragma once

#include <vector>

#include "demoguide/adam.hpp"
#include "demoguide/agent.hpp"
#include "demoguide/rollout.hpp"
#include "demoguide/similarity.hpp"

namespace demoguide {

struct TrainConfig {
  double pi_lr = 3e-4;
  double vf_lr = 1e-3;
  double gamma = 0.99;
  double lam = 0.97;
  double clip_ratio = 0.2;
  double target_kl = 0.01;
  int update_iters = 40;
  int epochs = 50;
  int steps_per_epoch = 1000;
  // weight of the demonstration term relative to the surrogate term
  double guidance_weight = 1.0;
  GuidanceConfig guidance;
  unsigned long long seed = 0;

  void check() const;  // throws std::invalid_argument
};

struct UpdateStats {
  double pi_loss = 0.0;   // clipped surrogate at the returned policy
  double vf_loss = 0.0;   // value MSE at the returned critic
  double approx_kl = 0.0; // mean(logp_old - logp_new) at the returned policy
  int demo_frames_used = 0;
  int stop_iter = 0;      // policy gradient steps applied
};

// loss = -mean_t min(rho_t*adv_t, clip(rho_t, 1-eps, 1+eps)*adv_t) with
// rho_t = exp(logp_new - logp_old). Rejects non-finite inputs.
double clip_objective(const Vec& logp_new, const Vec& logp_old, const Vec& adv,
                      double eps);

// One-step TD advantage per demo frame under the current critic:
// A = r + gamma*V(s_next)*(1-done) - V(s), recorded rewards used as-is.
Vec demo_advantage(const Critic& critic, const std::vector<Frame>& frames,
                   double gamma);

// Gradient of the clipped surrogate over e_batch plus the gradient of
// -(weight/|demo|) * sum_n demo_adv[n] * log p(a_n|s_n) over the demo frames
// (plain score-function term, no ratio or clipping). An empty demo set adds
// nothing: the result is bitwise the plain surrogate gradient.
Vec merged_policy_gradient(const Vec& policy_params, const MlpSpec& spec,
                           const AdvantageBatch& e_batch,
                           const std::vector<Frame>& demo_frames,
                           const Vec& demo_adv, double eps,
                           double guidance_weight);

// Up to cfg.update_iters policy steps on the merged objective, stopping early
// once approx_kl exceeds 1.5*cfg.target_kl (checked before each step after the
// first), then cfg.update_iters critic regression steps toward e_batch.ret.
// Optimizer states persist across calls. pi_lr = 0 applies no policy steps but
// still runs every iteration; stats report values at the returned networks.
UpdateStats update(Policy& policy, Critic& critic, const AdvantageBatch& e_batch,
                   const std::vector<Frame>& demo_frames, const TrainConfig& cfg,
                   OptimizerState& pi_opt, OptimizerState& vf_opt);

}  // namespace demoguide
