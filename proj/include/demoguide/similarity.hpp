#pragma once

#include <functional>
#include <string>
#include <vector>

#include "demoguide/demo.hpp"
#include "demoguide/mlp.hpp"
#include "demoguide/rng.hpp"

namespace demoguide {

// Per-dimension z-score statistics; std is floored at 1e-8.
struct NormStats {
  Vec mean;
  Vec std_dev;
};

NormStats fit_norm(const Mat& points);
Vec apply_norm(const NormStats& stats, const Vec& point);
Mat apply_norm(const NormStats& stats, const Mat& points);

// K centroids in normalized space plus the statistics that map raw points
// into that space. median_dist and n_points describe the training set and
// drive threshold resolution and the demo-ratio cap downstream.
struct ClusterModel {
  Mat centroids;
  int k = 0;
  NormStats norm;
  double inertia = 0.0;
  double median_dist = 0.0;  // median distance of training points to their centroid
  std::size_t n_points = 0;
};

using KmeansObserver = std::function<void(int iteration, double inertia)>;

// Lloyd iterations from k-means++ seeding over pre-normalized points.
// Stops when assignments are stable or after max_iter sweeps; empty
// clusters are re-seeded to the point farthest from its centroid. The
// observer sees the inertia after every update, which is non-increasing.
ClusterModel kmeans(const Mat& points, int k, int max_iter, Rng& rng,
                    const KmeansObserver& observer = {});

/// Convenience: fit normalization on raw points, then cluster.
ClusterModel fit_cluster_model(const Mat& raw_points, int k, int max_iter, Rng& rng);

// argmin over centroids of Euclidean distance; ties break to the lowest index
std::pair<int, double> nearest(const ClusterModel& model, const Vec& point);

enum class ThresholdMode { adaptive_median, absolute };

struct GuidanceConfig {
  int k_obs = 16;
  int k_act = 16;
  ThresholdMode threshold_mode = ThresholdMode::adaptive_median;
  double h_obs = 1.0;  // absolute mode, normalized units
  double h_act = 1.0;
  double demo_ratio = 0.2;
  int cutoff_epoch = 0;
  int kmeans_max_iter = 100;
};

// Demonstration frames whose normalized observation and action both fall
// within threshold of their nearest clusters; capped at
// demo_ratio * n_points by uniform subsampling (frame order preserved).
std::vector<Frame> select_similar(const DemoDataset& demo,
                                  const ClusterModel& obs_model,
                                  const ClusterModel& act_model,
                                  const GuidanceConfig& cfg, Rng& rng);

// selection without the ratio cap, exposed for property checks
std::vector<std::size_t> select_similar_indices(const DemoDataset& demo,
                                                const ClusterModel& obs_model,
                                                const ClusterModel& act_model,
                                                const GuidanceConfig& cfg);

std::string cluster_model_to_json(const ClusterModel& model);
ClusterModel cluster_model_from_json(const std::string& text);

}  // namespace demoguide
