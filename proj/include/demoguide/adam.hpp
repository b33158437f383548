#pragma once

#include "demoguide/mlp.hpp"

namespace demoguide {

struct OptimizerState {
  Vec first_moment;
  Vec second_moment;
  long long step_count = 0;

  static OptimizerState zeros(std::size_t n) {
    return {Vec(n, 0.0), Vec(n, 0.0), 0};
  }
};

// In-place Adam update (beta1 0.9, beta2 0.999, eps 1e-8) with bias
// correction. Throws std::invalid_argument on length mismatch and
// std::domain_error on non-finite gradient entries.
void adam_step(Vec& params, const Vec& grads, OptimizerState& state, double lr);

}  // namespace demoguide
