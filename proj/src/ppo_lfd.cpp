#include "demoguide/ppo_lfd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace demoguide {

void TrainConfig::check() const {
  if (!(pi_lr > 0.0)) throw std::invalid_argument("TrainConfig: pi_lr must be > 0");
  if (!(vf_lr > 0.0)) throw std::invalid_argument("TrainConfig: vf_lr must be > 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("TrainConfig: gamma must be in (0,1]");
  }
  if (!(lam >= 0.0 && lam <= 1.0)) {
    throw std::invalid_argument("TrainConfig: lambda must be in [0,1]");
  }
  if (!(clip_ratio > 0.0 && clip_ratio < 1.0)) {
    throw std::invalid_argument("TrainConfig: clip_ratio must be in (0,1)");
  }
  if (!(target_kl >= 0.0)) {
    throw std::invalid_argument("TrainConfig: target_kl must be >= 0");
  }
  if (update_iters < 1) {
    throw std::invalid_argument("TrainConfig: update_iters must be >= 1");
  }
  if (epochs < 1) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
  if (steps_per_epoch < 1) {
    throw std::invalid_argument("TrainConfig: steps_per_epoch must be >= 1");
  }
  if (!(guidance_weight >= 0.0)) {
    throw std::invalid_argument("TrainConfig: guidance_weight must be >= 0");
  }
  if (guidance.k_obs < 1 || guidance.k_act < 1) {
    throw std::invalid_argument("TrainConfig: cluster counts must be >= 1");
  }
  if (!(guidance.demo_ratio > 0.0 && guidance.demo_ratio <= 1.0)) {
    throw std::invalid_argument("TrainConfig: demo_ratio must be in (0,1]");
  }
  if (guidance.cutoff_epoch < 0 || guidance.cutoff_epoch > epochs) {
    throw std::invalid_argument("TrainConfig: cutoff_epoch must be in [0,epochs]");
  }
  if (guidance.threshold_mode == ThresholdMode::absolute &&
      !(guidance.h_obs > 0.0 && guidance.h_act > 0.0)) {
    throw std::invalid_argument("TrainConfig: absolute thresholds must be > 0");
  }
  if (guidance.kmeans_max_iter < 1) {
    throw std::invalid_argument("TrainConfig: kmeans_max_iter must be >= 1");
  }
}

double clip_objective(const Vec& logp_new, const Vec& logp_old, const Vec& adv,
                      double eps) {
  const std::size_t n = logp_new.size();
  if (logp_old.size() != n || adv.size() != n) {
    throw std::invalid_argument("clip_objective: vector lengths differ");
  }
  if (n == 0) throw std::invalid_argument("clip_objective: empty batch");
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("clip_objective: eps must be in (0,1)");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(logp_new[i]) || !std::isfinite(logp_old[i]) ||
        !std::isfinite(adv[i])) {
      throw std::invalid_argument("clip_objective: non-finite input");
    }
    const double rho = std::exp(logp_new[i] - logp_old[i]);
    const double clipped = std::clamp(rho, 1.0 - eps, 1.0 + eps) * adv[i];
    total += std::min(rho * adv[i], clipped);
  }
  return -total / static_cast<double>(n);
}

Vec demo_advantage(const Critic& critic, const std::vector<Frame>& frames,
                   double gamma) {
  if (frames.empty()) return {};
  const auto dim = static_cast<std::size_t>(critic.spec.input_dim);
  Mat s(frames.size());
  Mat s_next(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].s.size() != dim || frames[i].s_next.size() != dim) {
      throw std::invalid_argument("demo_advantage: observation dim mismatch");
    }
    s[i] = frames[i].s;
    s_next[i] = frames[i].s_next;
  }
  const Vec v = critic.value_batch(s);
  const Vec v_next = critic.value_batch(s_next);
  Vec adv(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const double bootstrap = frames[i].done ? 0.0 : gamma * v_next[i];
    adv[i] = frames[i].r + bootstrap - v[i];
    if (!std::isfinite(adv[i])) {
      throw std::domain_error("demo_advantage: non-finite advantage at frame " +
                              std::to_string(i));
    }
  }
  return adv;
}

namespace {

// dL/dlogp_t for the clipped surrogate: -adv*rho/n on the active (unclipped)
// branch, 0 where the clipped constant branch is active
Vec clip_coefficients(const Vec& logp_new, const Vec& logp_old, const Vec& adv,
                      double eps) {
  const std::size_t n = logp_new.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  Vec coeff(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = std::exp(logp_new[i] - logp_old[i]);
    const double unclipped = rho * adv[i];
    const double clipped = std::clamp(rho, 1.0 - eps, 1.0 + eps) * adv[i];
    coeff[i] = unclipped <= clipped ? -adv[i] * rho * inv_n : 0.0;
  }
  return coeff;
}

struct BatchViews {
  Mat obs;
  Mat act;
  Vec logp_old;
  Vec adv;
};

BatchViews split_batch(const AdvantageBatch& e_batch) {
  const std::size_t n = e_batch.frames.size();
  if (n == 0) throw std::invalid_argument("ppo_lfd: empty exploration batch");
  if (e_batch.adv.size() != n) {
    throw std::invalid_argument("ppo_lfd: advantage length mismatch");
  }
  BatchViews v;
  v.obs.resize(n);
  v.act.resize(n);
  v.logp_old.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    v.obs[i] = e_batch.frames[i].s;
    v.act[i] = e_batch.frames[i].a;
    v.logp_old[i] = e_batch.frames[i].logp_old;
  }
  v.adv = e_batch.adv;
  return v;
}

Vec recompute_logp(const Vec& params, const MlpSpec& spec, const Mat& means,
                   const Mat& act) {
  GaussianPolicyOutput out;
  out.log_std = policy_log_std(params, spec);
  Vec logp(means.size());
  for (std::size_t i = 0; i < means.size(); ++i) {
    out.mean = means[i];
    logp[i] = log_prob(out, act[i]);
  }
  return logp;
}

Vec merged_gradient_with_means(const Vec& params, const MlpSpec& spec,
                               const BatchViews& e, const Mat& means,
                               const Vec& logp_new,
                               const std::vector<Frame>& demo_frames,
                               const Vec& demo_adv, double eps, double weight) {
  const Vec coeff = clip_coefficients(logp_new, e.logp_old, e.adv, eps);
  Vec grad = weighted_log_prob_grad_batch(params, spec, e.obs, e.act, coeff, means);

  if (!demo_frames.empty()) {
    const std::size_t m = demo_frames.size();
    if (demo_adv.size() != m) {
      throw std::invalid_argument("merged_policy_gradient: demo_adv length mismatch");
    }
    Mat demo_obs(m);
    Mat demo_act(m);
    Vec demo_coeff(m);
    const double scale = -weight / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
      demo_obs[i] = demo_frames[i].s;
      demo_act[i] = demo_frames[i].a;
      demo_coeff[i] = scale * demo_adv[i];
    }
    const Vec demo_grad =
        weighted_log_prob_grad_batch(params, spec, demo_obs, demo_act, demo_coeff);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += demo_grad[i];
  }

  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (!std::isfinite(grad[i])) {
      throw std::domain_error("merged_policy_gradient: non-finite entry at index " +
                              std::to_string(i));
    }
  }
  return grad;
}

}  // namespace

Vec merged_policy_gradient(const Vec& policy_params, const MlpSpec& spec,
                           const AdvantageBatch& e_batch,
                           const std::vector<Frame>& demo_frames,
                           const Vec& demo_adv, double eps,
                           double guidance_weight) {
  const BatchViews e = split_batch(e_batch);
  const Mat means = policy_mean_batch(policy_params, spec, e.obs);
  const Vec logp_new = recompute_logp(policy_params, spec, means, e.act);
  return merged_gradient_with_means(policy_params, spec, e, means, logp_new,
                                    demo_frames, demo_adv, eps, guidance_weight);
}

UpdateStats update(Policy& policy, Critic& critic, const AdvantageBatch& e_batch,
                   const std::vector<Frame>& demo_frames, const TrainConfig& cfg,
                   OptimizerState& pi_opt, OptimizerState& vf_opt) {
  const BatchViews e = split_batch(e_batch);
  const std::size_t n = e.obs.size();
  if (e_batch.ret.size() != n) {
    throw std::invalid_argument("update: return length mismatch");
  }

  // demo advantages are frozen for the whole update (critic moves afterwards)
  // and mapped through the batch's advantage transform so both terms of the
  // merged gradient share one scale
  Vec demo_adv = demo_advantage(critic, demo_frames, cfg.gamma);
  for (double& a : demo_adv) {
    a = (a - e_batch.adv_mean) / (e_batch.adv_std + 1e-8);
  }

  UpdateStats stats;
  stats.demo_frames_used = static_cast<int>(demo_frames.size());

  Mat means;
  Vec logp_new;
  double kl = 0.0;
  double pi_loss = 0.0;
  const auto measure = [&] {
    means = policy_mean_batch(policy.params, policy.spec, e.obs);
    logp_new = recompute_logp(policy.params, policy.spec, means, e.act);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += e.logp_old[i] - logp_new[i];
    kl = sum / static_cast<double>(n);
    pi_loss = clip_objective(logp_new, e.logp_old, e.adv, cfg.clip_ratio);
  };

  int applied = 0;
  bool fresh = false;
  for (int it = 0; it < cfg.update_iters; ++it) {
    measure();
    fresh = true;
    if (applied > 0 && kl > 1.5 * cfg.target_kl) break;
    if (cfg.pi_lr > 0.0) {
      const Vec grad =
          merged_gradient_with_means(policy.params, policy.spec, e, means, logp_new,
                                     demo_frames, demo_adv, cfg.clip_ratio,
                                     cfg.guidance_weight);
      adam_step(policy.params, grad, pi_opt, cfg.pi_lr);
      fresh = false;
    }
    ++applied;
  }
  if (!fresh) measure();
  stats.stop_iter = applied;
  stats.approx_kl = kl;
  stats.pi_loss = pi_loss;

  for (int it = 0; it < cfg.update_iters && cfg.vf_lr > 0.0; ++it) {
    const Vec values = critic.value_batch(e.obs);
    Mat value_grads(n, Vec(1));
    const double scale = 2.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      value_grads[i][0] = scale * (values[i] - e_batch.ret[i]);
    }
    const Vec grad = backward_batch(critic.params, critic.spec, e.obs, value_grads);
    adam_step(critic.params, grad, vf_opt, cfg.vf_lr);
  }
  const Vec values = critic.value_batch(e.obs);
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i] - e_batch.ret[i];
    sq += d * d;
  }
  stats.vf_loss = sq / static_cast<double>(n);

  return stats;
}

}  // namespace demoguide
