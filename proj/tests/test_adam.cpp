#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "demoguide/adam.hpp"
#include "helpers.hpp"

using namespace demoguide;

namespace {

// scripted reference: one textbook Adam step, kept independent of the library
void reference_step(Vec& params, const Vec& grads, Vec& m, Vec& v,
                    long long& t, double lr) {
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  ++t;
  for (std::size_t i = 0; i < params.size(); ++i) {
    m[i] = b1 * m[i] + (1.0 - b1) * grads[i];
    v[i] = b2 * v[i] + (1.0 - b2) * grads[i] * grads[i];
    const double mhat = m[i] / (1.0 - std::pow(b1, static_cast<double>(t)));
    const double vhat = v[i] / (1.0 - std::pow(b2, static_cast<double>(t)));
    params[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

}  // namespace

TEST_CASE("zero gradient leaves parameters unchanged") {
  Vec params{1.0, -2.0, 0.5};
  OptimizerState state = OptimizerState::zeros(3);
  adam_step(params, Vec(3, 0.0), state, 0.01);
  CHECK(params[0] == 1.0);
  CHECK(params[1] == -2.0);
  CHECK(params[2] == 0.5);
  CHECK(state.step_count == 1);
}

TEST_CASE("first step from zero state matches the hand computation") {
  Vec params{1.0};
  OptimizerState state = OptimizerState::zeros(1);
  adam_step(params, {0.5}, state, 0.1);
  // bias-corrected first step: mhat = g, vhat = g^2, delta = -lr*g/(|g|+eps)
  const double expected = 1.0 - 0.1 * 0.5 / (std::sqrt(0.25) + 1e-8);
  CHECK(params[0] == doctest::Approx(expected).epsilon(1e-12));
  CHECK(state.step_count == 1);
  CHECK(state.second_moment[0] >= 0.0);
}

TEST_CASE("two steps reproduce a scripted Adam trace") {
  Rng rng(11);
  Vec params = testutil::random_vec(rng, 6);
  Vec ref_params = params;
  OptimizerState state = OptimizerState::zeros(6);
  Vec m(6, 0.0), v(6, 0.0);
  long long t = 0;
  for (int step = 0; step < 2; ++step) {
    const Vec grads = testutil::random_vec(rng, 6);
    adam_step(params, grads, state, 3e-3);
    reference_step(ref_params, grads, m, v, t, 3e-3);
  }
  CHECK(testutil::max_abs_diff(params, ref_params) < 1e-14);
  CHECK(state.step_count == 2);
  for (double x : state.second_moment) CHECK(x >= 0.0);
}

TEST_CASE("rejects malformed updates") {
  Vec params{1.0, 2.0};
  OptimizerState state = OptimizerState::zeros(2);
  CHECK_THROWS_AS(adam_step(params, Vec(3, 0.1), state, 0.01),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      adam_step(params, {0.1, std::numeric_limits<double>::quiet_NaN()}, state,
                0.01),
      std::domain_error);
  CHECK_THROWS_AS(adam_step(params, {0.1, 0.1}, state, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(adam_step(params, {0.1, 0.1}, state, -1.0),
                  std::invalid_argument);
  // failed calls must not advance the step counter
  CHECK(state.step_count == 0);
}
