#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "demoguide/harness.hpp"
#include "demoguide/trainer.hpp"

using namespace demoguide;

namespace {

TrainConfig small_config(int epochs, int steps, unsigned long long seed) {
  TrainConfig cfg;
  cfg.epochs = epochs;
  cfg.steps_per_epoch = steps;
  cfg.update_iters = 10;
  cfg.seed = seed;
  return cfg;
}

DemoDataset controller_demo(const EnvSpec& env, int episodes = 6) {
  Rng rng(123);
  return record(
      env,
      [](const Vec& obs) {
        return Vec{2.0 * obs[4] - 1.0 * obs[2], 2.0 * obs[5] - 1.0 * obs[3]};
      },
      episodes, rng, "ctrl");
}

std::vector<std::string> checkpoint_trace(const EnvSpec& env, TrainConfig cfg,
                                          std::optional<DemoDataset> demo) {
  Trainer trainer(env, cfg, std::move(demo));
  std::vector<std::string> trace;
  trainer.set_epoch_hook([&](int, const Policy& p, const Critic& c) {
    trace.push_back(to_checkpoint_json("point_reach", p, c));
  });
  trainer.run();
  return trace;
}

}  // namespace

TEST_CASE("epoch rows carry ordinals, cumulative steps, and demo counts") {
  const EnvSpec env = EnvSpec::make(EnvName::point_reach);
  Trainer trainer(env, small_config(2, 150, 7), std::nullopt);
  const RunRecord rec = trainer.run();

  REQUIRE(rec.rows.size() == 2);
  CHECK(rec.rows[0].epoch == 1);
  CHECK(rec.rows[1].epoch == 2);
  CHECK(rec.rows[0].env_steps == 150);
  CHECK(rec.rows[1].env_steps == 300);
  CHECK(trainer.env_steps() == 300);
  CHECK(rec.rows[0].demo_frames_used == 0);
  CHECK(rec.rows[1].demo_frames_used == 0);
}

TEST_CASE("identical seeds reproduce a run byte for byte") {
  const EnvSpec env = EnvSpec::make(EnvName::point_reach);
  Trainer t1(env, small_config(3, 100, 42), std::nullopt);
  Trainer t2(env, small_config(3, 100, 42), std::nullopt);
  CHECK(run_record_to_csv(t1.run()) == run_record_to_csv(t2.run()));

  Trainer t3(env, small_config(3, 100, 43), std::nullopt);
  CHECK(run_record_to_csv(Trainer(env, small_config(3, 100, 42), std::nullopt).run()) !=
        run_record_to_csv(t3.run()));
}

TEST_CASE("guidance that never engages is bitwise identical to vanilla") {
  const EnvSpec env = EnvSpec::make(EnvName::point_reach);
  const DemoDataset demo = controller_demo(env);

  TrainConfig vanilla = small_config(2, 100, 11);
  const std::vector<std::string> base = checkpoint_trace(env, vanilla, std::nullopt);

  SUBCASE("demo present but cutoff zero") {
    TrainConfig cfg = small_config(2, 100, 11);
    cfg.guidance.cutoff_epoch = 0;
    const std::vector<std::string> trace = checkpoint_trace(env, cfg, demo);
    REQUIRE(trace.size() == base.size());
    for (std::size_t i = 0; i < base.size(); ++i) CHECK(trace[i] == base[i]);
  }
  SUBCASE("cutoff set but no demo supplied") {
    TrainConfig cfg = small_config(2, 100, 11);
    cfg.guidance.cutoff_epoch = 2;
    const std::vector<std::string> trace = checkpoint_trace(env, cfg, std::nullopt);
    REQUIRE(trace.size() == base.size());
    for (std::size_t i = 0; i < base.size(); ++i) CHECK(trace[i] == base[i]);
  }
}

TEST_CASE("demo frames stop flowing at the cutoff epoch") {
  const EnvSpec env = EnvSpec::make(EnvName::point_reach);
  const DemoDataset demo = controller_demo(env);

  TrainConfig cfg = small_config(4, 200, 3);
  cfg.guidance.cutoff_epoch = 2;
  cfg.guidance.k_obs = 8;
  cfg.guidance.k_act = 8;
  // wide absolute thresholds admit every frame, so the cap is exercised and
  // usage before the cutoff cannot be zero by distributional accident
  cfg.guidance.threshold_mode = ThresholdMode::absolute;
  cfg.guidance.h_obs = 1e6;
  cfg.guidance.h_act = 1e6;

  Trainer trainer(env, cfg, demo);
  std::vector<int> clustered_epochs;
  trainer.set_cluster_hook(
      [&](int epoch_index, const ClusterModel& obs_model,
          const ClusterModel& act_model) {
        clustered_epochs.push_back(epoch_index);
        CHECK(obs_model.k == 8);
        CHECK(act_model.k == 8);
        CHECK(obs_model.n_points == 200);
      });
  const RunRecord rec = trainer.run();

  CHECK(clustered_epochs == std::vector<int>{0, 1});
  const int cap = static_cast<int>(cfg.guidance.demo_ratio * 200);
  const int expect =
      std::min(cap, static_cast<int>(demo.frames.size()));
  CHECK(rec.rows[0].demo_frames_used == expect);
  CHECK(rec.rows[1].demo_frames_used == expect);
  CHECK(rec.rows[2].demo_frames_used == 0);
  CHECK(rec.rows[3].demo_frames_used == 0);
}

TEST_CASE("stepwise driving matches a full run") {
  const EnvSpec env = EnvSpec::make(EnvName::point_reach);
  const DemoDataset demo = controller_demo(env);
  TrainConfig cfg = small_config(3, 100, 9);
  cfg.guidance.cutoff_epoch = 3;
  cfg.guidance.k_obs = 4;
  cfg.guidance.k_act = 4;

  Trainer whole(env, cfg, demo);
  const RunRecord full = whole.run();

  Trainer stepped(env, cfg, demo);
  RunRecord manual;
  for (int e = 0; e < cfg.epochs; ++e) manual.rows.push_back(stepped.run_epoch(e));

  CHECK(run_record_to_csv(full) == run_record_to_csv(manual));
  CHECK(to_checkpoint_json("x", whole.policy(), whole.critic()) ==
        to_checkpoint_json("x", stepped.policy(), stepped.critic()));
}

TEST_CASE("constructor rejects demos with foreign dimensions") {
  const EnvSpec env = EnvSpec::make(EnvName::point_reach);
  DemoDataset demo = controller_demo(env, 2);
  demo.frames[0].s.pop_back();
  CHECK_THROWS_AS(Trainer(env, small_config(1, 100, 0), demo),
                  std::invalid_argument);

  DemoDataset demo2 = controller_demo(env, 2);
  demo2.frames[3].a.push_back(0.0);
  CHECK_THROWS_AS(Trainer(env, small_config(1, 100, 0), demo2),
                  std::invalid_argument);
}
