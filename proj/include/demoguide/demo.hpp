#pragma once

#include <functional>
#include <string>
#include <vector>

#include "demoguide/agent.hpp"
#include "demoguide/env.hpp"
#include "demoguide/rollout.hpp"

namespace demoguide {

struct DemoMeta {
  std::string env;
  std::string checkpoint;  // recorder id, e.g. checkpoint path
  int episodes = 0;
  double mean_episode_reward = 0.0;
};

// Demonstration frames recorded from an expert; logp_old is unused here.
struct DemoDataset {
  DemoMeta meta;
  std::vector<Frame> frames;
};

using ActionFn = std::function<Vec(const Vec& obs)>;

// Replays an actor for the given number of episodes and stores every frame.
DemoDataset record(const EnvSpec& env, const ActionFn& actor, int episodes,
                   Rng& rng, const std::string& recorder_id);

// Policy overload; deterministic=true replays the mean action.
DemoDataset record(const EnvSpec& env, const Policy& expert, int episodes,
                   bool deterministic, Rng& rng,
                   const std::string& recorder_id = "policy");

// JSONL: meta line first, then one frame object per line.
void save_demo(const DemoDataset& dataset, const std::string& path);
DemoDataset load_demo(const std::string& path);

struct ValidationReport {
  bool pass = false;
  int frames_checked = 0;
  std::vector<std::string> failures;
};

ValidationReport validate(const DemoDataset& dataset, const EnvSpec& spec);

}  // namespace demoguide
