#include "demoguide/similarity.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace demoguide {

namespace {

double sq_dist(const Vec& a, const Vec& b) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    d2 += d * d;
  }
  return d2;
}

// index of nearest centroid and squared distance
std::pair<int, double> nearest_sq(const Mat& centroids, const Vec& point) {
  int best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d2 = sq_dist(centroids[c], point);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = static_cast<int>(c);
    }
  }
  return {best, best_d2};
}

double median_of(Vec values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Mat kmeans_pp_seed(const Mat& points, int k, Rng& rng) {
  const std::size_t n = points.size();
  Mat centroids;
  centroids.reserve(static_cast<std::size_t>(k));
  centroids.push_back(points[rng.uniform_int(n)]);

  Vec d2(n);
  while (centroids.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = nearest_sq(centroids, points[i]).second;
      total += d2[i];
    }
    if (total <= 0.0) {
      // all remaining points coincide with centroids
      centroids.push_back(points[rng.uniform_int(n)]);
      continue;
    }
    const double target = rng.uniform() * total;
    double cumulative = 0.0;
    std::size_t chosen = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      cumulative += d2[i];
      if (cumulative >= target) {
        chosen = i;
        break;
      }
    }
    centroids.push_back(points[chosen]);
  }
  return centroids;
}

}  // namespace

NormStats fit_norm(const Mat& points) {
  if (points.size() < 2) throw std::invalid_argument("fit_norm: need >= 2 points");
  const std::size_t dim = points[0].size();
  NormStats stats{Vec(dim, 0.0), Vec(dim, 0.0)};
  for (const Vec& p : points) {
    if (p.size() != dim) throw std::invalid_argument("fit_norm: ragged points");
    for (std::size_t j = 0; j < dim; ++j) stats.mean[j] += p[j];
  }
  const double inv_n = 1.0 / static_cast<double>(points.size());
  for (std::size_t j = 0; j < dim; ++j) stats.mean[j] *= inv_n;
  for (const Vec& p : points) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = p[j] - stats.mean[j];
      stats.std_dev[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < dim; ++j) {
    stats.std_dev[j] = std::max(std::sqrt(stats.std_dev[j] * inv_n), 1e-8);
  }
  return stats;
}

Vec apply_norm(const NormStats& stats, const Vec& point) {
  if (point.size() != stats.mean.size()) {
    throw std::invalid_argument("apply_norm: dimension mismatch");
  }
  Vec out(point.size());
  for (std::size_t j = 0; j < point.size(); ++j) {
    out[j] = (point[j] - stats.mean[j]) / stats.std_dev[j];
  }
  return out;
}

Mat apply_norm(const NormStats& stats, const Mat& points) {
  Mat out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = apply_norm(stats, points[i]);
  return out;
}

ClusterModel kmeans(const Mat& points, int k, int max_iter, Rng& rng,
                    const KmeansObserver& observer) {
  const std::size_t n = points.size();
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (n < static_cast<std::size_t>(k)) {
    throw std::invalid_argument("kmeans: k exceeds number of points");
  }
  const std::size_t dim = points[0].size();

  ClusterModel model;
  model.k = k;
  model.n_points = n;
  model.centroids = kmeans_pp_seed(points, k, rng);

  std::vector<int> assignment(n, -1);
  std::vector<int> prev_assignment;
  for (int iter = 0; iter < max_iter; ++iter) {
    // E-step
    for (std::size_t i = 0; i < n; ++i) {
      assignment[i] = nearest_sq(model.centroids, points[i]).first;
    }
    if (assignment == prev_assignment) break;
    prev_assignment = assignment;

    // M-step
    Mat sums(static_cast<std::size_t>(k), Vec(dim, 0.0));
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(assignment[i]);
      for (std::size_t j = 0; j < dim; ++j) sums[c][j] += points[i][j];
      counts[c] += 1;
    }
    for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        model.centroids[c][j] = sums[c][j] / static_cast<double>(counts[c]);
      }
    }
    // re-seed empty clusters to the farthest point
    for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
      if (counts[c] != 0) continue;
      double worst = -1.0;
      std::size_t worst_i = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d2 = nearest_sq(model.centroids, points[i]).second;
        if (d2 > worst) {
          worst = d2;
          worst_i = i;
        }
      }
      model.centroids[c] = points[worst_i];
    }

    if (observer) {
      double inertia = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        inertia += nearest_sq(model.centroids, points[i]).second;
      }
      observer(iter, inertia);
    }
  }

  // final statistics under converged assignments
  Vec dists(n);
  model.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d2 = nearest_sq(model.centroids, points[i]).second;
    model.inertia += d2;
    dists[i] = std::sqrt(d2);
  }
  model.median_dist = median_of(std::move(dists));
  return model;
}

ClusterModel fit_cluster_model(const Mat& raw_points, int k, int max_iter, Rng& rng) {
  NormStats stats = fit_norm(raw_points);
  ClusterModel model = kmeans(apply_norm(stats, raw_points), k, max_iter, rng);
  model.norm = std::move(stats);
  return model;
}

std::pair<int, double> nearest(const ClusterModel& model, const Vec& point) {
  if (model.centroids.empty() || point.size() != model.centroids[0].size()) {
    throw std::invalid_argument("nearest: dimension mismatch");
  }
  auto [idx, d2] = nearest_sq(model.centroids, point);
  return {idx, std::sqrt(d2)};
}

namespace {

std::pair<double, double> resolve_thresholds(const ClusterModel& obs_model,
                                             const ClusterModel& act_model,
                                             const GuidanceConfig& cfg) {
  if (cfg.threshold_mode == ThresholdMode::adaptive_median) {
    return {obs_model.median_dist, act_model.median_dist};
  }
  return {cfg.h_obs, cfg.h_act};
}

}  // namespace

std::vector<std::size_t> select_similar_indices(const DemoDataset& demo,
                                                const ClusterModel& obs_model,
                                                const ClusterModel& act_model,
                                                const GuidanceConfig& cfg) {
  const auto [h_obs, h_act] = resolve_thresholds(obs_model, act_model, cfg);
  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < demo.frames.size(); ++i) {
    const Frame& f = demo.frames[i];
    const double d_obs = nearest(obs_model, apply_norm(obs_model.norm, f.s)).second;
    if (d_obs > h_obs) continue;
    const double d_act = nearest(act_model, apply_norm(act_model.norm, f.a)).second;
    if (d_act > h_act) continue;
    selected.push_back(i);
  }
  return selected;
}

std::vector<Frame> select_similar(const DemoDataset& demo,
                                  const ClusterModel& obs_model,
                                  const ClusterModel& act_model,
                                  const GuidanceConfig& cfg, Rng& rng) {
  std::vector<std::size_t> selected =
      select_similar_indices(demo, obs_model, act_model, cfg);

  const auto cap = static_cast<std::size_t>(
      cfg.demo_ratio * static_cast<double>(obs_model.n_points));
  if (selected.size() > cap) {
    // partial Fisher-Yates, then restore frame order
    for (std::size_t i = 0; i < cap; ++i) {
      const std::size_t j = i + rng.uniform_int(selected.size() - i);
      std::swap(selected[i], selected[j]);
    }
    selected.resize(cap);
    std::sort(selected.begin(), selected.end());
  }

  std::vector<Frame> frames;
  frames.reserve(selected.size());
  for (std::size_t idx : selected) frames.push_back(demo.frames[idx]);
  return frames;
}

std::string cluster_model_to_json(const ClusterModel& model) {
  nlohmann::json j{{"centroids", model.centroids},
                   {"k", model.k},
                   {"norm", {{"mean", model.norm.mean}, {"std", model.norm.std_dev}}},
                   {"inertia", model.inertia},
                   {"median_dist", model.median_dist},
                   {"n_points", model.n_points}};
  return j.dump();
}

ClusterModel cluster_model_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  ClusterModel model;
  model.centroids = j.at("centroids").get<Mat>();
  model.k = j.at("k").get<int>();
  model.norm.mean = j.at("norm").at("mean").get<Vec>();
  model.norm.std_dev = j.at("norm").at("std").get<Vec>();
  model.inertia = j.at("inertia").get<double>();
  model.median_dist = j.at("median_dist").get<double>();
  model.n_points = j.at("n_points").get<std::size_t>();
  return model;
}

}  // namespace demoguide
