#include "demoguide/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace demoguide {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5*ln(2*pi)

void check_policy_params(const Vec& params, const MlpSpec& spec) {
  if (static_cast<int>(params.size()) != policy_param_count(spec)) {
    throw std::invalid_argument("policy parameter vector length does not match spec");
  }
}

}  // namespace

int policy_param_count(const MlpSpec& spec) {
  return spec.param_count() + spec.output_dim;
}

Vec init_policy_params(const MlpSpec& spec, Rng& rng) {
  Vec params = init_mlp_params(spec, rng);
  // damp the mean head so early actions stay near zero
  const auto layers = spec.layers();
  std::size_t off = params.size();
  off -= static_cast<std::size_t>(layers.back().fan_out);
  off -= static_cast<std::size_t>(layers.back().fan_in) * layers.back().fan_out;
  for (std::size_t i = off; i < params.size(); ++i) params[i] *= 0.01;
  params.insert(params.end(), static_cast<std::size_t>(spec.output_dim), -0.5);
  return params;
}

Vec policy_log_std(const Vec& params, const MlpSpec& spec) {
  check_policy_params(params, spec);
  Vec out(static_cast<std::size_t>(spec.output_dim));
  const std::size_t base = params.size() - out.size();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::clamp(params[base + i], kLogStdMin, kLogStdMax);
  }
  return out;
}

GaussianPolicyOutput policy_forward(const Vec& params, const MlpSpec& spec,
                                    const Vec& obs) {
  check_policy_params(params, spec);
  Vec mlp_params(params.begin(), params.begin() + spec.param_count());
  return {forward(mlp_params, spec, obs), policy_log_std(params, spec)};
}

Mat policy_mean_batch(const Vec& params, const MlpSpec& spec, const Mat& obs) {
  check_policy_params(params, spec);
  Vec mlp_params(params.begin(), params.begin() + spec.param_count());
  return forward_batch(mlp_params, spec, obs);
}

double log_prob(const GaussianPolicyOutput& out, const Vec& action) {
  if (action.size() != out.mean.size() || out.log_std.size() != out.mean.size()) {
    throw std::invalid_argument("log_prob: dimension mismatch");
  }
  double lp = 0.0;
  for (std::size_t i = 0; i < action.size(); ++i) {
    const double inv_sigma = std::exp(-out.log_std[i]);
    const double z = (action[i] - out.mean[i]) * inv_sigma;
    lp += -0.5 * z * z - out.log_std[i] - kHalfLog2Pi;
  }
  return lp;
}

Vec weighted_log_prob_grad_batch(const Vec& params, const MlpSpec& spec,
                                 const Mat& obs, const Mat& actions,
                                 const Vec& coeffs) {
  return weighted_log_prob_grad_batch(params, spec, obs, actions, coeffs,
                                      policy_mean_batch(params, spec, obs));
}

Vec weighted_log_prob_grad_batch(const Vec& params, const MlpSpec& spec,
                                 const Mat& obs, const Mat& actions,
                                 const Vec& coeffs, const Mat& means) {
  check_policy_params(params, spec);
  const std::size_t n = obs.size();
  if (actions.size() != n || coeffs.size() != n || means.size() != n) {
    throw std::invalid_argument("weighted_log_prob_grad_batch: row counts differ");
  }
  const int act_dim = spec.output_dim;
  const Vec log_std = policy_log_std(params, spec);
  Vec inv_var(static_cast<std::size_t>(act_dim));
  for (int j = 0; j < act_dim; ++j) inv_var[j] = std::exp(-2.0 * log_std[j]);

  // d logp / d mean_j = (a_j - mu_j) / sigma_j^2
  // d logp / d raw log_std_j = z_j^2 - 1, zeroed where the clamp is active
  Mat mean_grads(n, Vec(static_cast<std::size_t>(act_dim), 0.0));
  Vec log_std_grad(static_cast<std::size_t>(act_dim), 0.0);
  const std::size_t base = params.size() - static_cast<std::size_t>(act_dim);
  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<int>(actions[i].size()) != act_dim) {
      throw std::invalid_argument("weighted_log_prob_grad_batch: action dim mismatch");
    }
    for (int j = 0; j < act_dim; ++j) {
      const double diff = actions[i][j] - means[i][j];
      mean_grads[i][j] = coeffs[i] * diff * inv_var[j];
      const double raw = params[base + static_cast<std::size_t>(j)];
      if (raw > kLogStdMin && raw < kLogStdMax) {
        log_std_grad[j] += coeffs[i] * (diff * diff * inv_var[j] - 1.0);
      }
    }
  }

  Vec mlp_params(params.begin(), params.begin() + spec.param_count());
  Vec grad = backward_batch(mlp_params, spec, obs, mean_grads);
  grad.insert(grad.end(), log_std_grad.begin(), log_std_grad.end());
  return grad;
}

Vec log_prob_grad(const Vec& params, const MlpSpec& spec, const Vec& state,
                  const Vec& action) {
  return weighted_log_prob_grad_batch(params, spec, Mat{state}, Mat{action},
                                      Vec{1.0});
}

Vec sample_action(const GaussianPolicyOutput& out, Rng& rng) {
  Vec a(out.mean.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = out.mean[i] + std::exp(out.log_std[i]) * rng.normal();
  }
  return a;
}

}  // namespace demoguide
