#include "demoguide/trainer.hpp"

#include <stdexcept>
#include <utility>

namespace demoguide {

namespace {
// keeps the guidance stream disjoint from the collection stream
constexpr std::uint64_t kGuidanceStream = 0x9e3779b97f4a7c15ULL;
}  // namespace

Trainer::Trainer(const EnvSpec& env, const TrainConfig& cfg,
                 std::optional<DemoDataset> demo)
    : env_(env),
      cfg_(cfg),
      demo_(std::move(demo)),
      rng_(cfg.seed),
      guide_rng_(cfg.seed ^ kGuidanceStream) {
  if (demo_) {
    for (const Frame& f : demo_->frames) {
      if (f.s.size() != static_cast<std::size_t>(env_.obs_dim) ||
          f.a.size() != static_cast<std::size_t>(env_.act_dim)) {
        throw std::invalid_argument("Trainer: demo frame dims do not match env");
      }
    }
  }
  policy_ = Policy::init(env_.obs_dim, env_.act_dim, rng_);
  critic_ = Critic::init(env_.obs_dim, rng_);
  pi_opt_ = OptimizerState::zeros(policy_.params.size());
  vf_opt_ = OptimizerState::zeros(critic_.params.size());
}

EpochRow Trainer::run_epoch(int epoch_index) {
  const Collection col = collect(env_, policy_, critic_, cfg_.steps_per_epoch, rng_);
  steps_ += static_cast<long long>(col.frame_count());
  const AdvantageBatch batch =
      build_advantage_batch(col, critic_, cfg_.gamma, cfg_.lam);

  std::vector<Frame> dp;
  if (demo_ && !demo_->frames.empty() && epoch_index < cfg_.guidance.cutoff_epoch) {
    const std::size_t n = batch.frames.size();
    Mat obs(n);
    Mat act(n);
    for (std::size_t i = 0; i < n; ++i) {
      obs[i] = batch.frames[i].s;
      act[i] = batch.frames[i].a;
    }
    const ClusterModel obs_model =
        fit_cluster_model(obs, cfg_.guidance.k_obs, cfg_.guidance.kmeans_max_iter,
                          guide_rng_);
    const ClusterModel act_model =
        fit_cluster_model(act, cfg_.guidance.k_act, cfg_.guidance.kmeans_max_iter,
                          guide_rng_);
    if (cluster_hook_) cluster_hook_(epoch_index, obs_model, act_model);
    dp = select_similar(*demo_, obs_model, act_model, cfg_.guidance, guide_rng_);
  }

  const UpdateStats stats = update(policy_, critic_, batch, dp, cfg_, pi_opt_, vf_opt_);

  EpochRow row;
  row.epoch = epoch_index + 1;
  row.env_steps = steps_;
  row.mean_episode_reward = col.mean_episode_reward;
  row.pi_loss = stats.pi_loss;
  row.vf_loss = stats.vf_loss;
  row.approx_kl = stats.approx_kl;
  row.demo_frames_used = stats.demo_frames_used;
  if (epoch_hook_) epoch_hook_(epoch_index, policy_, critic_);
  return row;
}

RunRecord Trainer::run() {
  RunRecord record;
  record.rows.reserve(static_cast<std::size_t>(cfg_.epochs));
  for (int e = 0; e < cfg_.epochs; ++e) record.rows.push_back(run_epoch(e));
  return record;
}

}  // namespace demoguide
