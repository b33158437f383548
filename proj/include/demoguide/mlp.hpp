#pragma once

#include <string>
#include <vector>

#include "demoguide/rng.hpp"

namespace demoguide {

using Vec = std::vector<double>;
// row-major matrix stored as rows of equal length
using Mat = std::vector<Vec>;

enum class Activation { Tanh };

// Architecture of a fully-connected net with tanh hidden layers and a
// linear output layer. Parameters live in a flat vector, per layer:
// weight block (fan_out x fan_in, row-major) followed by the bias.
struct MlpSpec {
  int input_dim = 0;
  std::vector<int> hidden;
  int output_dim = 0;
  Activation activation = Activation::Tanh;

  struct Layer {
    int fan_in = 0;
    int fan_out = 0;
  };

  std::vector<Layer> layers() const;
  int param_count() const;
  void check() const;  // throws std::invalid_argument on bad dimensions

  bool operator==(const MlpSpec&) const = default;
};

// Xavier-uniform weights in +-sqrt(6/(fan_in+fan_out)), zero biases.
Vec init_mlp_params(const MlpSpec& spec, Rng& rng);

// y = mlp(x)
Vec forward(const Vec& params, const MlpSpec& spec, const Vec& input);

// gradient of dot(output, output_grad) with respect to params
Vec backward(const Vec& params, const MlpSpec& spec, const Vec& input,
             const Vec& output_grad);

// Batched paths used by the learner; one GEMM per layer. inputs is
// n x input_dim, the result n x output_dim.
Mat forward_batch(const Vec& params, const MlpSpec& spec, const Mat& inputs);

// gradient of sum_i dot(output_i, output_grads_i) w.r.t. params
Vec backward_batch(const Vec& params, const MlpSpec& spec, const Mat& inputs,
                   const Mat& output_grads);

}  // namespace demoguide
