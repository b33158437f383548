#include "demoguide/mlp.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace demoguide {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatMap = Eigen::Map<const RowMat>;
using MatMap = Eigen::Map<RowMat>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;
using VecMap = Eigen::Map<Eigen::VectorXd>;

RowMat to_eigen(const Mat& rows, int cols) {
  RowMat m(static_cast<Eigen::Index>(rows.size()), cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (static_cast<int>(rows[i].size()) != cols) {
      throw std::invalid_argument("batch row has inconsistent length");
    }
    m.row(i) = ConstVecMap(rows[i].data(), cols);
  }
  return m;
}

Mat from_eigen(const RowMat& m) {
  Mat rows(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    rows[i].assign(m.row(i).begin(), m.row(i).end());
  }
  return rows;
}

void check_params(const Vec& params, const MlpSpec& spec) {
  spec.check();
  if (static_cast<int>(params.size()) != spec.param_count()) {
    throw std::invalid_argument("parameter vector length does not match spec");
  }
}

}  // namespace

std::vector<MlpSpec::Layer> MlpSpec::layers() const {
  std::vector<Layer> out;
  int fan_in = input_dim;
  for (int h : hidden) {
    out.push_back({fan_in, h});
    fan_in = h;
  }
  out.push_back({fan_in, output_dim});
  return out;
}

int MlpSpec::param_count() const {
  int count = 0;
  for (const Layer& l : layers()) count += (l.fan_in + 1) * l.fan_out;
  return count;
}

void MlpSpec::check() const {
  if (input_dim < 1 || output_dim < 1) {
    throw std::invalid_argument("MlpSpec dimensions must be >= 1");
  }
  for (int h : hidden) {
    if (h < 1) throw std::invalid_argument("MlpSpec hidden sizes must be >= 1");
  }
}

Vec init_mlp_params(const MlpSpec& spec, Rng& rng) {
  spec.check();
  Vec params(static_cast<std::size_t>(spec.param_count()), 0.0);
  std::size_t off = 0;
  for (const MlpSpec::Layer& l : spec.layers()) {
    const double limit = std::sqrt(6.0 / static_cast<double>(l.fan_in + l.fan_out));
    const std::size_t n_w = static_cast<std::size_t>(l.fan_in) * l.fan_out;
    for (std::size_t i = 0; i < n_w; ++i) params[off + i] = rng.uniform(-limit, limit);
    off += n_w + static_cast<std::size_t>(l.fan_out);  // biases stay zero
  }
  return params;
}

Vec forward(const Vec& params, const MlpSpec& spec, const Vec& input) {
  check_params(params, spec);
  if (static_cast<int>(input.size()) != spec.input_dim) {
    throw std::invalid_argument("input length does not match spec.input_dim");
  }
  Eigen::VectorXd h = ConstVecMap(input.data(), spec.input_dim);
  const auto layers = spec.layers();
  std::size_t off = 0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    ConstMatMap w(params.data() + off, l.fan_out, l.fan_in);
    off += static_cast<std::size_t>(l.fan_in) * l.fan_out;
    ConstVecMap b(params.data() + off, l.fan_out);
    off += static_cast<std::size_t>(l.fan_out);
    h = w * h + b;
    if (i + 1 < layers.size()) h = h.array().tanh().matrix();
  }
  return Vec(h.begin(), h.end());
}

Vec backward(const Vec& params, const MlpSpec& spec, const Vec& input,
             const Vec& output_grad) {
  if (static_cast<int>(output_grad.size()) != spec.output_dim) {
    throw std::invalid_argument("output_grad length does not match spec.output_dim");
  }
  return backward_batch(params, spec, Mat{input}, Mat{output_grad});
}

Mat forward_batch(const Vec& params, const MlpSpec& spec, const Mat& inputs) {
  check_params(params, spec);
  RowMat h = to_eigen(inputs, spec.input_dim);
  const auto layers = spec.layers();
  std::size_t off = 0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    ConstMatMap w(params.data() + off, l.fan_out, l.fan_in);
    off += static_cast<std::size_t>(l.fan_in) * l.fan_out;
    ConstVecMap b(params.data() + off, l.fan_out);
    off += static_cast<std::size_t>(l.fan_out);
    h = (h * w.transpose()).rowwise() + b.transpose();
    if (i + 1 < layers.size()) h = h.array().tanh().matrix();
  }
  return from_eigen(h);
}

Vec backward_batch(const Vec& params, const MlpSpec& spec, const Mat& inputs,
                   const Mat& output_grads) {
  check_params(params, spec);
  if (inputs.size() != output_grads.size()) {
    throw std::invalid_argument("inputs and output_grads row counts differ");
  }
  const auto layers = spec.layers();
  const std::size_t n_layers = layers.size();

  // forward pass, caching post-activation values per layer
  std::vector<RowMat> acts(n_layers + 1);
  acts[0] = to_eigen(inputs, spec.input_dim);
  std::vector<std::size_t> w_off(n_layers), b_off(n_layers);
  std::size_t off = 0;
  for (std::size_t i = 0; i < n_layers; ++i) {
    const auto& l = layers[i];
    w_off[i] = off;
    off += static_cast<std::size_t>(l.fan_in) * l.fan_out;
    b_off[i] = off;
    off += static_cast<std::size_t>(l.fan_out);
    ConstMatMap w(params.data() + w_off[i], l.fan_out, l.fan_in);
    ConstVecMap b(params.data() + b_off[i], l.fan_out);
    acts[i + 1] = (acts[i] * w.transpose()).rowwise() + b.transpose();
    if (i + 1 < n_layers) acts[i + 1] = acts[i + 1].array().tanh().matrix();
  }

  // reverse pass
  Vec grad(params.size(), 0.0);
  RowMat delta = to_eigen(output_grads, spec.output_dim);
  for (std::size_t ri = n_layers; ri-- > 0;) {
    const auto& l = layers[ri];
    ConstMatMap w(params.data() + w_off[ri], l.fan_out, l.fan_in);
    MatMap gw(grad.data() + w_off[ri], l.fan_out, l.fan_in);
    VecMap gb(grad.data() + b_off[ri], l.fan_out);
    gw = delta.transpose() * acts[ri];
    gb = delta.colwise().sum();
    if (ri > 0) {
      delta = (delta * w).array() * (1.0 - acts[ri].array().square());
    }
  }
  return grad;
}

}  // namespace demoguide
