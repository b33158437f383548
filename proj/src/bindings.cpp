#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include <optional>
#include <string>

#include "demoguide/demo.hpp"
#include "demoguide/harness.hpp"

namespace py = pybind11;
using namespace demoguide;

namespace {

py::dict row_to_dict(const EpochRow& row) {
  py::dict d;
  d["epoch"] = row.epoch;
  d["env_steps"] = row.env_steps;
  d["mean_episode_reward"] = row.mean_episode_reward;
  d["pi_loss"] = row.pi_loss;
  d["vf_loss"] = row.vf_loss;
  d["approx_kl"] = row.approx_kl;
  d["demo_frames_used"] = row.demo_frames_used;
  return d;
}

// The single-run Trainer accepts the experiment key set plus "seed", which
// the sweep-level schema spells "seeds".
TrainConfig train_config_from_json(const std::string& config_json) {
  nlohmann::json j = nlohmann::json::parse(config_json);
  if (!j.is_object()) {
    throw std::invalid_argument("trainer config: top level must be an object");
  }
  unsigned long long seed = 0;
  bool has_seed = false;
  if (j.contains("seed")) {
    seed = j.at("seed").get<unsigned long long>();
    has_seed = true;
    j.erase("seed");
  }
  ExperimentConfig cfg = experiment_config_from_json(j.dump());
  TrainConfig t = cfg.train;
  if (has_seed) t.seed = seed;
  if (t.guidance.cutoff_epoch < 0) t.guidance.cutoff_epoch = 0;
  return t;
}

// owns the environment state between reset/step calls
struct EnvHandle {
  EnvSpec spec;
  EnvState state;
  Rng rng;
  bool live = false;

  EnvHandle(const std::string& name, unsigned long long seed)
      : spec(EnvSpec::make(name)), rng(seed) {}

  Vec reset() {
    auto [s, obs] = demoguide::reset(spec, rng);
    state = s;
    live = true;
    return obs;
  }

  py::tuple step_env(const Vec& action) {
    if (!live) throw std::runtime_error("Env.step before reset");
    StepResult res = demoguide::step(spec, state, action);
    state = res.state;
    if (res.done) live = false;
    return py::make_tuple(res.obs, res.reward, res.done);
  }
};

struct TrainerHandle {
  Trainer trainer;

  TrainerHandle(const std::string& env, const std::string& config_json,
                const std::optional<std::string>& demo_path)
      : trainer(EnvSpec::make(env), train_config_from_json(config_json),
                demo_path ? std::optional<DemoDataset>(load_demo(*demo_path))
                          : std::nullopt) {}

  py::list run() {
    py::list rows;
    for (int e = 0; e < trainer.config().epochs; ++e) {
      rows.append(row_to_dict(trainer.run_epoch(e)));
    }
    return rows;
  }

  py::dict run_epoch(int epoch_index) {
    return row_to_dict(trainer.run_epoch(epoch_index));
  }

  void save(const std::string& path) {
    save_checkpoint(path, to_string(trainer.env().name), trainer.policy(),
                    trainer.critic());
  }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "demonstration-guided PPO core";

  m.def("gae", &gae, py::arg("rewards"), py::arg("values"), py::arg("last_value"),
        py::arg("dones"), py::arg("gamma"), py::arg("lam"),
        "backward-recursion generalized advantage estimates");

  m.def("clip_objective", &clip_objective, py::arg("logp_new"), py::arg("logp_old"),
        py::arg("adv"), py::arg("eps"), "PPO clipped surrogate loss");

  m.def(
      "kmeans",
      [](const Mat& points, int k, int max_iter, unsigned long long seed) {
        Rng rng(seed);
        const ClusterModel model = kmeans(points, k, max_iter, rng);
        py::dict d;
        d["centroids"] = model.centroids;
        d["inertia"] = model.inertia;
        d["median_dist"] = model.median_dist;
        return d;
      },
      py::arg("points"), py::arg("k"), py::arg("max_iter") = 100,
      py::arg("seed") = 0, "Lloyd k-means over pre-normalized points");

  py::class_<EnvHandle>(m, "Env")
      .def(py::init<const std::string&, unsigned long long>(), py::arg("name"),
           py::arg("seed") = 0)
      .def("reset", &EnvHandle::reset)
      .def("step", &EnvHandle::step_env, py::arg("action"))
      .def_property_readonly("obs_dim",
                             [](const EnvHandle& h) { return h.spec.obs_dim; })
      .def_property_readonly("act_dim",
                             [](const EnvHandle& h) { return h.spec.act_dim; })
      .def_property_readonly("horizon",
                             [](const EnvHandle& h) { return h.spec.horizon; });

  py::class_<TrainerHandle>(m, "Trainer")
      .def(py::init<const std::string&, const std::string&,
                    const std::optional<std::string>&>(),
           py::arg("env"), py::arg("config_json") = "{}",
           py::arg("demo_path") = py::none())
      .def("run", &TrainerHandle::run)
      .def("run_epoch", &TrainerHandle::run_epoch, py::arg("epoch_index"))
      .def("save_checkpoint", &TrainerHandle::save, py::arg("path"));

  m.def(
      "run_experiment",
      [](const std::string& config_json, const std::string& dump_clusters) {
        ExperimentConfig cfg = experiment_config_from_json(config_json);
        cfg.finalize();
        const ExperimentResult result = run_experiment(cfg, dump_clusters);
        py::list seeds;
        for (const SeedOutcome& s : result.seeds) {
          py::dict d;
          d["seed"] = s.seed;
          d["ok"] = s.ok;
          d["error"] = s.error;
          d["csv"] = s.csv_path;
          d["checkpoint"] = s.checkpoint_path;
          py::list rows;
          for (const EpochRow& row : s.record.rows) rows.append(row_to_dict(row));
          d["rows"] = rows;
          seeds.append(d);
        }
        py::dict out;
        out["all_ok"] = result.all_ok();
        out["seeds"] = seeds;
        return out;
      },
      py::arg("config_json"), py::arg("dump_clusters") = std::string(),
      "run a full seed sweep from a flat config JSON");

  m.def(
      "record_demo",
      [](const std::string& checkpoint, int episodes, const std::string& out_file,
         unsigned long long seed, bool stochastic) {
        std::string env_name;
        Rng init_rng(0);
        Policy policy = Policy::init(1, 1, init_rng);
        Critic critic = Critic::init(1, init_rng);
        load_checkpoint(checkpoint, env_name, policy, critic);
        Rng rng(seed);
        const DemoDataset demo = record(EnvSpec::make(env_name), policy, episodes,
                                        !stochastic, rng, checkpoint);
        save_demo(demo, out_file);
        py::dict d;
        d["env"] = demo.meta.env;
        d["episodes"] = demo.meta.episodes;
        d["frames"] = demo.frames.size();
        d["mean_episode_reward"] = demo.meta.mean_episode_reward;
        return d;
      },
      py::arg("checkpoint"), py::arg("episodes"), py::arg("out_file"),
      py::arg("seed") = 0, py::arg("stochastic") = false,
      "replay a checkpointed policy and save the frames as demo JSONL");

  m.def(
      "efficiency_ratios_json",
      [](const std::vector<std::string>& guided_csvs,
         const std::vector<std::string>& vanilla_csvs,
         const std::vector<double>& levels, int window) {
        std::vector<RunRecord> guided;
        for (const auto& p : guided_csvs) guided.push_back(read_run_csv(p));
        std::vector<RunRecord> vanilla;
        for (const auto& p : vanilla_csvs) vanilla.push_back(read_run_csv(p));
        return compare_report_to_json(
            efficiency_ratios(guided, vanilla, levels, window));
      },
      py::arg("guided_csvs"), py::arg("vanilla_csvs"),
      py::arg("levels") = std::vector<double>{85, 70, 50, 20},
      py::arg("window") = 10, "sample-efficiency ratio report as JSON text");

  m.attr("__version__") = "0.1.0";
}
