#pragma once

#include "demoguide/mlp.hpp"
#include "demoguide/rng.hpp"

namespace demoguide {

// Diagonal-Gaussian policy head on top of an MLP mean network. The policy
// parameter vector is the MLP parameters followed by one state-independent
// raw log-std entry per action dimension; the effective log-std is clamped
// to [kLogStdMin, kLogStdMax].
inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 2.0;

struct GaussianPolicyOutput {
  Vec mean;
  Vec log_std;  // clamped
};

int policy_param_count(const MlpSpec& spec);

// Xavier-uniform body, final mean layer scaled by 0.01, log_std -0.5.
Vec init_policy_params(const MlpSpec& spec, Rng& rng);

GaussianPolicyOutput policy_forward(const Vec& params, const MlpSpec& spec,
                                    const Vec& obs);

// batched mean evaluation; log_std is state independent
Mat policy_mean_batch(const Vec& params, const MlpSpec& spec, const Mat& obs);
Vec policy_log_std(const Vec& params, const MlpSpec& spec);  // clamped

double log_prob(const GaussianPolicyOutput& out, const Vec& action);

// gradient of log p(action|state) with respect to the policy parameters
Vec log_prob_grad(const Vec& params, const MlpSpec& spec, const Vec& state,
                  const Vec& action);

// gradient of sum_i coeffs[i] * log p(actions[i]|obs[i]); means may be
// passed in when already computed by the caller
Vec weighted_log_prob_grad_batch(const Vec& params, const MlpSpec& spec,
                                 const Mat& obs, const Mat& actions,
                                 const Vec& coeffs);
Vec weighted_log_prob_grad_batch(const Vec& params, const MlpSpec& spec,
                                 const Mat& obs, const Mat& actions,
                                 const Vec& coeffs, const Mat& means);

// pre-clip sample: mean + sigma * z
Vec sample_action(const GaussianPolicyOutput& out, Rng& rng);

}  // namespace demoguide
