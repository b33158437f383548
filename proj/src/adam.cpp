#include "demoguide/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace demoguide {

void adam_step(Vec& params, const Vec& grads, OptimizerState& state, double lr) {
  constexpr double beta1 = 0.9;
  constexpr double beta2 = 0.999;
  constexpr double eps = 1e-8;

  const std::size_t n = params.size();
  if (grads.size() != n || state.first_moment.size() != n ||
      state.second_moment.size() != n) {
    throw std::invalid_argument("adam_step: vector lengths differ");
  }
  if (!(lr > 0.0)) throw std::invalid_argument("adam_step: lr must be > 0");
  for (double g : grads) {
    if (!std::isfinite(g)) {
      throw std::domain_error("adam_step: non-finite gradient entry");
    }
  }

  state.step_count += 1;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.step_count));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.step_count));
  for (std::size_t i = 0; i < n; ++i) {
    double& m = state.first_moment[i];
    double& v = state.second_moment[i];
    m = beta1 * m + (1.0 - beta1) * grads[i];
    v = beta2 * v + (1.0 - beta2) * grads[i] * grads[i];
    params[i] -= lr * (m / bc1) / (std::sqrt(v / bc2) + eps);
  }
}

}  // namespace demoguide
