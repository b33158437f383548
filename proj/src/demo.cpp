#include "demoguide/demo.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace demoguide {

namespace {

using nlohmann::json;

bool all_finite(const Vec& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

DemoDataset record(const EnvSpec& env, const ActionFn& actor, int episodes,
                   Rng& rng, const std::string& recorder_id) {
  if (episodes < 1) throw std::invalid_argument("record: episodes must be >= 1");

  DemoDataset out;
  out.meta.env = to_string(env.name);
  out.meta.checkpoint = recorder_id;
  out.meta.episodes = episodes;

  double reward_sum = 0.0;
  for (int ep = 0; ep < episodes; ++ep) {
    auto [state, obs] = reset(env, rng);
    bool done = false;
    while (!done) {
      // The frame stores the executed action: s_next and r are consequences of
      // the clipped command, and downstream similarity tests compare it against
      // exploration actions in the same box.
      Vec action = actor(obs);
      for (double& a : action) a = std::clamp(a, env.action_low, env.action_high);
      StepResult res = step(env, state, action);
      out.frames.push_back(Frame{obs, res.obs, res.reward, action, res.done, 0.0});
      reward_sum += res.reward;
      state = res.state;
      obs = res.obs;
      done = res.done;
    }
  }
  out.meta.mean_episode_reward = reward_sum / episodes;
  return out;
}

DemoDataset record(const EnvSpec& env, const Policy& expert, int episodes,
                   bool deterministic, Rng& rng, const std::string& recorder_id) {
  if (expert.spec.input_dim != env.obs_dim || expert.spec.output_dim != env.act_dim) {
    throw std::invalid_argument("record: expert dimensions do not match environment");
  }
  ActionFn actor;
  if (deterministic) {
    actor = [&expert](const Vec& obs) { return expert.forward(obs).mean; };
  } else {
    actor = [&expert, &rng](const Vec& obs) {
      return sample_action(expert.forward(obs), rng);
    };
  }
  return record(env, actor, episodes, rng, recorder_id);
}

void save_demo(const DemoDataset& dataset, const std::string& path) {
  if (dataset.frames.empty()) {
    throw std::invalid_argument("save_demo: refusing to write empty dataset");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_demo: cannot open " + path);

  json meta{{"meta",
             {{"env", dataset.meta.env},
              {"checkpoint", dataset.meta.checkpoint},
              {"episodes", dataset.meta.episodes},
              {"mean_episode_reward", dataset.meta.mean_episode_reward}}}};
  out << meta.dump() << '\n';
  for (const Frame& f : dataset.frames) {
    json j{{"s", f.s}, {"s_next", f.s_next}, {"r", f.r}, {"a", f.a}, {"done", f.done}};
    out << j.dump() << '\n';
  }
}

DemoDataset load_demo(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_demo: cannot open " + path);

  DemoDataset out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      throw std::runtime_error("load_demo: empty line " + std::to_string(line_no));
    }
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error("load_demo: malformed line " + std::to_string(line_no) +
                               ": " + e.what());
    }
    try {
      if (line_no == 1) {
        const json& m = j.at("meta");
        out.meta.env = m.at("env").get<std::string>();
        out.meta.checkpoint = m.at("checkpoint").get<std::string>();
        out.meta.episodes = m.at("episodes").get<int>();
        out.meta.mean_episode_reward = m.at("mean_episode_reward").get<double>();
      } else {
        Frame f;
        f.s = j.at("s").get<Vec>();
        f.s_next = j.at("s_next").get<Vec>();
        f.r = j.at("r").get<double>();
        f.a = j.at("a").get<Vec>();
        f.done = j.at("done").get<bool>();
        out.frames.push_back(std::move(f));
      }
    } catch (const json::exception& e) {
      throw std::runtime_error("load_demo: malformed line " + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  if (line_no == 0) throw std::runtime_error("load_demo: empty file " + path);
  if (out.frames.empty()) {
    throw std::runtime_error("load_demo: no frames in " + path);
  }
  return out;
}

ValidationReport validate(const DemoDataset& dataset, const EnvSpec& spec) {
  ValidationReport report;
  report.frames_checked = static_cast<int>(dataset.frames.size());

  if (dataset.meta.episodes < 1) report.failures.push_back("meta.episodes < 1");
  if (dataset.frames.empty()) report.failures.push_back("dataset has no frames");

  int done_count = 0;
  for (std::size_t i = 0; i < dataset.frames.size(); ++i) {
    const Frame& f = dataset.frames[i];
    const std::string at = "frame " + std::to_string(i);
    if (static_cast<int>(f.s.size()) != spec.obs_dim ||
        static_cast<int>(f.s_next.size()) != spec.obs_dim) {
      report.failures.push_back(at + ": observation dim mismatch");
    }
    if (static_cast<int>(f.a.size()) != spec.act_dim) {
      report.failures.push_back(at + ": action dim mismatch");
    }
    if (!all_finite(f.s) || !all_finite(f.s_next) || !all_finite(f.a) ||
        !std::isfinite(f.r)) {
      report.failures.push_back(at + ": non-finite value");
    }
    if (f.done) ++done_count;
  }
  if (!dataset.frames.empty() && !dataset.frames.back().done) {
    report.failures.push_back("last frame is not terminal");
  }
  if (done_count != dataset.meta.episodes) {
    report.failures.push_back("done flags (" + std::to_string(done_count) +
                              ") do not match meta.episodes (" +
                              std::to_string(dataset.meta.episodes) + ")");
  }

  report.pass = report.failures.empty();
  return report;
}

}  // namespace demoguide
