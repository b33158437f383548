#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "demoguide/demo.hpp"
#include "demoguide/harness.hpp"

namespace {

using namespace demoguide;

std::string default_out_dir() {
  if (const char* env = std::getenv("DEMOGUIDE_OUT"); env && *env) return env;
  return "out";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::vector<RunRecord> read_records(const std::vector<std::string>& paths) {
  std::vector<RunRecord> records;
  records.reserve(paths.size());
  for (const std::string& p : paths) records.push_back(read_run_csv(p));
  return records;
}

int cmd_train(const ExperimentConfig& cfg, const std::string& dump_clusters) {
  const ExperimentResult result = run_experiment(cfg, dump_clusters);
  for (const SeedOutcome& s : result.seeds) {
    if (s.ok) {
      std::cout << "seed " << s.seed << ": ok, "
                << s.record.rows.back().env_steps << " steps, final reward "
                << s.record.rows.back().mean_episode_reward << " -> " << s.csv_path
                << "\n";
    } else {
      std::cout << "seed " << s.seed << ": FAILED: " << s.error << "\n";
    }
  }
  return result.all_ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"demoguide: demonstration-guided PPO experiments"};
  app.require_subcommand(1);

  // train
  auto* train_cmd = app.add_subcommand("train", "run a seed sweep");
  std::string config_path;
  train_cmd->add_option("--config", config_path, "experiment config JSON")
      ->check(CLI::ExistingFile);
  std::string env_name, mode_str, demo_path, out_dir, dump_clusters, threshold_mode;
  std::vector<unsigned long long> seeds;
  int epochs = 0, steps_per_epoch = 0, update_iters = 0, k_obs = 0, k_act = 0,
      cutoff_epoch = 0, kmeans_max_iter = 0;
  double pi_lr = 0, vf_lr = 0, gamma = 0, lam = 0, clip_ratio = 0, target_kl = 0,
         guidance_weight = 0, demo_ratio = 0, h_obs = 0, h_act = 0;
  auto* o_env = train_cmd->add_option("--env", env_name, "point_reach|obstacle_reach");
  auto* o_mode = train_cmd->add_option("--mode", mode_str,
                                       "vanilla|guided|ablation_40");
  auto* o_demo = train_cmd->add_option("--demo", demo_path, "demo JSONL path");
  auto* o_out = train_cmd->add_option("--out", out_dir, "output directory");
  auto* o_seeds =
      train_cmd->add_option("--seeds", seeds, "seed list")->delimiter(',');
  auto* o_epochs = train_cmd->add_option("--epochs", epochs, "training epochs");
  auto* o_steps =
      train_cmd->add_option("--steps-per-epoch", steps_per_epoch, "frames per epoch");
  auto* o_pi_lr = train_cmd->add_option("--pi-lr", pi_lr, "policy learning rate");
  auto* o_vf_lr = train_cmd->add_option("--vf-lr", vf_lr, "critic learning rate");
  auto* o_gamma = train_cmd->add_option("--gamma", gamma, "discount");
  auto* o_lam = train_cmd->add_option("--lam", lam, "GAE lambda");
  auto* o_clip = train_cmd->add_option("--clip-ratio", clip_ratio, "PPO clip");
  auto* o_kl = train_cmd->add_option("--target-kl", target_kl, "KL early stop");
  auto* o_iters =
      train_cmd->add_option("--update-iters", update_iters, "gradient iterations");
  auto* o_weight = train_cmd->add_option("--guidance-weight", guidance_weight,
                                         "demo term weight");
  auto* o_k_obs = train_cmd->add_option("--k-obs", k_obs, "observation clusters");
  auto* o_k_act = train_cmd->add_option("--k-act", k_act, "action clusters");
  auto* o_tmode = train_cmd->add_option("--threshold-mode", threshold_mode,
                                        "adaptive_median|absolute");
  auto* o_h_obs = train_cmd->add_option("--h-obs", h_obs, "absolute obs threshold");
  auto* o_h_act = train_cmd->add_option("--h-act", h_act, "absolute act threshold");
  auto* o_ratio = train_cmd->add_option("--demo-ratio", demo_ratio,
                                        "max |D_p| as a fraction of |E|");
  auto* o_cutoff = train_cmd->add_option("--cutoff-epoch", cutoff_epoch,
                                         "guidance cutoff (-1 = auto)");
  auto* o_kmi = train_cmd->add_option("--kmeans-max-iter", kmeans_max_iter,
                                      "Lloyd iteration cap");
  train_cmd->add_option("--dump-clusters", dump_clusters,
                        "directory for per-epoch cluster JSON dumps");

  // record-demo
  auto* record_cmd = app.add_subcommand("record-demo", "record expert episodes");
  std::string checkpoint_path, record_out;
  int episodes = 100;
  bool stochastic = false;
  unsigned long long record_seed = 0;
  record_cmd->add_option("--checkpoint", checkpoint_path, "expert checkpoint JSON")
      ->required()
      ->check(CLI::ExistingFile);
  record_cmd->add_option("--episodes", episodes, "episodes to record");
  record_cmd->add_option("--out-file", record_out, "demo JSONL path");
  record_cmd->add_flag("--stochastic", stochastic,
                       "sample actions instead of replaying the mean");
  record_cmd->add_option("--seed", record_seed, "environment seed");

  // compare
  auto* compare_cmd =
      app.add_subcommand("compare", "efficiency ratios between record sets");
  std::vector<std::string> guided_files, vanilla_files, ablation_files;
  std::vector<double> levels = {85, 70, 50, 20};
  std::string compare_out;
  int window = 10;
  compare_cmd->add_option("--guided", guided_files, "guided CSVs")
      ->required()
      ->delimiter(',');
  compare_cmd->add_option("--vanilla", vanilla_files, "vanilla CSVs")
      ->required()
      ->delimiter(',');
  compare_cmd->add_option("--ablation", ablation_files, "ablation_40 CSVs")
      ->delimiter(',');
  compare_cmd->add_option("--levels", levels, "reward levels in percent")
      ->delimiter(',');
  compare_cmd->add_option("--window", window, "smoothing window (epochs)");
  compare_cmd->add_option("--out-file", compare_out, "report JSON path");

  // plot
  auto* plot_cmd = app.add_subcommand("plot", "render learning curves to SVG");
  std::vector<std::string> group_specs;
  std::string plot_out;
  plot_cmd->add_option("--group", group_specs, "label=a.csv,b.csv (repeatable)")
      ->required();
  plot_cmd->add_option("--out-file", plot_out, "SVG path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) {
      ExperimentConfig cfg;
      if (!config_path.empty()) {
        cfg = experiment_config_from_json(slurp(config_path));
      } else {
        cfg.out_dir = default_out_dir();
        cfg.train.guidance.cutoff_epoch = -1;  // auto unless overridden
      }
      if (o_env->count()) cfg.env = env_name;
      if (o_mode->count()) cfg.mode = mode_from_string(mode_str);
      if (o_demo->count()) cfg.demo_path = demo_path;
      if (o_out->count()) cfg.out_dir = out_dir;
      if (o_seeds->count()) cfg.seeds = seeds;
      if (o_epochs->count()) cfg.train.epochs = epochs;
      if (o_steps->count()) cfg.train.steps_per_epoch = steps_per_epoch;
      if (o_pi_lr->count()) cfg.train.pi_lr = pi_lr;
      if (o_vf_lr->count()) cfg.train.vf_lr = vf_lr;
      if (o_gamma->count()) cfg.train.gamma = gamma;
      if (o_lam->count()) cfg.train.lam = lam;
      if (o_clip->count()) cfg.train.clip_ratio = clip_ratio;
      if (o_kl->count()) cfg.train.target_kl = target_kl;
      if (o_iters->count()) cfg.train.update_iters = update_iters;
      if (o_weight->count()) cfg.train.guidance_weight = guidance_weight;
      if (o_k_obs->count()) cfg.train.guidance.k_obs = k_obs;
      if (o_k_act->count()) cfg.train.guidance.k_act = k_act;
      if (o_tmode->count()) {
        cfg.train.guidance.threshold_mode = threshold_mode == "absolute"
                                                ? ThresholdMode::absolute
                                                : ThresholdMode::adaptive_median;
        if (threshold_mode != "absolute" && threshold_mode != "adaptive_median") {
          throw std::invalid_argument("unknown threshold mode '" + threshold_mode +
                                      "'");
        }
      }
      if (o_h_obs->count()) cfg.train.guidance.h_obs = h_obs;
      if (o_h_act->count()) cfg.train.guidance.h_act = h_act;
      if (o_ratio->count()) cfg.train.guidance.demo_ratio = demo_ratio;
      if (o_cutoff->count()) cfg.train.guidance.cutoff_epoch = cutoff_epoch;
      if (o_kmi->count()) cfg.train.guidance.kmeans_max_iter = kmeans_max_iter;
      cfg.finalize();
      return cmd_train(cfg, dump_clusters);
    }

    if (record_cmd->parsed()) {
      std::string env_from_ckpt;
      Rng init_rng(0);
      Policy policy = Policy::init(1, 1, init_rng);
      Critic critic = Critic::init(1, init_rng);
      load_checkpoint(checkpoint_path, env_from_ckpt, policy, critic);
      const EnvSpec env = EnvSpec::make(env_from_ckpt);
      Rng rng(record_seed);
      const DemoDataset demo =
          record(env, policy, episodes, !stochastic, rng, checkpoint_path);
      if (record_out.empty()) {
        record_out = (std::filesystem::path(default_out_dir()) / "demo.jsonl")
                         .string();
        std::filesystem::create_directories(default_out_dir());
      }
      save_demo(demo, record_out);
      std::cout << "recorded " << demo.meta.episodes << " episodes ("
                << demo.frames.size() << " frames), mean episode reward "
                << demo.meta.mean_episode_reward << " -> " << record_out << "\n";
      return 0;
    }

    if (compare_cmd->parsed()) {
      const std::vector<RunRecord> guided = read_records(guided_files);
      const std::vector<RunRecord> vanilla = read_records(vanilla_files);
      const CompareReport report = efficiency_ratios(guided, vanilla, levels, window);
      nlohmann::json doc;
      doc["efficiency"] = nlohmann::json::parse(compare_report_to_json(report));
      if (!ablation_files.empty()) {
        const AblationReport ab =
            ablation_report(read_records(ablation_files), guided, window);
        doc["ablation"] = nlohmann::json::parse(ablation_report_to_json(ab));
      } else {
        doc["ablation"] = nullptr;
      }
      const std::string text = doc.dump(2);
      std::cout << text << "\n";
      if (compare_out.empty()) {
        std::filesystem::create_directories(default_out_dir());
        compare_out =
            (std::filesystem::path(default_out_dir()) / "compare.json").string();
      }
      spit(compare_out, text + "\n");
      return 0;
    }

    if (plot_cmd->parsed()) {
      std::vector<CurveGroup> groups;
      for (const std::string& spec : group_specs) {
        const std::size_t eq = spec.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= spec.size()) {
          throw std::invalid_argument("--group wants label=a.csv[,b.csv...], got '" +
                                      spec + "'");
        }
        CurveGroup group;
        group.label = spec.substr(0, eq);
        std::stringstream paths(spec.substr(eq + 1));
        std::string path;
        while (std::getline(paths, path, ',')) {
          group.records.push_back(read_run_csv(path));
        }
        groups.push_back(std::move(group));
      }
      if (plot_out.empty()) {
        std::filesystem::create_directories(default_out_dir());
        plot_out =
            (std::filesystem::path(default_out_dir()) / "curves.svg").string();
      }
      emit_curves(groups, plot_out);
      std::cout << "wrote " << plot_out << "\n";
      return 0;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 2;
}
