#pragma once

// Shared test oracles. These are deliberately naive re-implementations so
// they cannot share a bug with the library's vectorized paths.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "demoguide/mlp.hpp"
#include "demoguide/rng.hpp"

namespace testutil {

using demoguide::Mat;
using demoguide::MlpSpec;
using demoguide::Vec;

// nested-loop MLP forward: tanh hidden layers, linear output
inline Vec naive_forward(const Vec& params, const MlpSpec& spec,
                         const Vec& input) {
  Vec x = input;
  std::size_t off = 0;
  const auto layers = spec.layers();
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const int fi = layers[li].fan_in;
    const int fo = layers[li].fan_out;
    Vec y(static_cast<std::size_t>(fo), 0.0);
    for (int r = 0; r < fo; ++r) {
      double acc = 0.0;
      for (int c = 0; c < fi; ++c) {
        acc += params[off + static_cast<std::size_t>(r) * fi + c] * x[c];
      }
      y[static_cast<std::size_t>(r)] =
          acc + params[off + static_cast<std::size_t>(fo) * fi + r];
    }
    off += static_cast<std::size_t>(fo) * fi + fo;
    if (li + 1 < layers.size()) {
      for (double& v : y) v = std::tanh(v);
    }
    x = std::move(y);
  }
  return x;
}

// central finite differences of a scalar function of a parameter vector
inline Vec fd_grad(const std::function<double(const Vec&)>& f, Vec params,
                   double h = 1e-5) {
  Vec g(params.size(), 0.0);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double save = params[i];
    params[i] = save + h;
    const double hi = f(params);
    params[i] = save - h;
    const double lo = f(params);
    params[i] = save;
    g[i] = (hi - lo) / (2.0 * h);
  }
  return g;
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline double max_rel_err(const Vec& a, const Vec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, rel_err(a[i], b[i]));
  return m;
}

inline double max_abs_diff(const Vec& a, const Vec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline Vec random_vec(demoguide::Rng& rng, std::size_t n, double scale = 1.0) {
  Vec v(n);
  for (double& x : v) x = rng.uniform(-scale, scale);
  return v;
}

inline Mat random_mat(demoguide::Rng& rng, std::size_t rows, std::size_t cols,
                      double scale = 1.0) {
  Mat m(rows);
  for (Vec& row : m) row = random_vec(rng, cols, scale);
  return m;
}

}  // namespace testutil
