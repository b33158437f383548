#pragma once

#include <optional>
#include <string>
#include <vector>

#include "demoguide/trainer.hpp"

namespace demoguide {

enum class Mode { vanilla, guided, ablation_40 };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);

// One experiment = one mode trained over a sweep of seeds. finalize()
// resolves mode-dependent guidance settings and must run before use:
// guided fills a negative cutoff_epoch with 30% of epochs, ablation_40
// forces demo_ratio 0.4 and guidance through the whole run.
struct ExperimentConfig {
  TrainConfig train;
  std::string env = "point_reach";
  std::string demo_path;  // required for guided / ablation_40
  Mode mode = Mode::vanilla;
  std::vector<unsigned long long> seeds = {0, 1, 2, 3, 4};
  std::string out_dir = "out";

  void finalize();
  void check() const;  // throws std::invalid_argument
};

// Flat JSON key set; missing keys keep defaults, cutoff_epoch defaults to
// auto (-1). finalize() is left to the caller so CLI flags can override.
ExperimentConfig experiment_config_from_json(const std::string& text);
std::string experiment_config_to_json(const ExperimentConfig& cfg);

// CSV schema: epoch,env_steps,mean_episode_reward,pi_loss,vf_loss,approx_kl,
// demo_frames_used. Doubles are shortest round-trip, so write/read is exact.
std::string run_record_to_csv(const RunRecord& record);
RunRecord run_record_from_csv(const std::string& text);
void write_run_csv(const std::string& path, const RunRecord& record);
RunRecord read_run_csv(const std::string& path);

struct SeedOutcome {
  unsigned long long seed = 0;
  bool ok = false;
  std::string error;  // set when ok is false
  std::string csv_path;
  std::string checkpoint_path;
  RunRecord record;
};

struct ExperimentResult {
  std::vector<SeedOutcome> seeds;
  bool all_ok() const;
};

// Runs every seed, writing <mode>_seed<seed>.csv and a final checkpoint per
// seed under cfg.out_dir. A failing seed leaves an .error.txt record and the
// sweep continues. dump_clusters_dir, when nonempty, receives per-epoch
// cluster model JSON files for guided epochs.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::string& dump_clusters_dir = "");

// trailing-mean smoothing (window w: mean of the last w values seen)
Vec smooth(const Vec& values, int window);

struct LevelReport {
  double level_pct = 0.0;
  double threshold = 0.0;
  // first env_steps whose smoothed reward reaches the threshold, per seed;
  // +infinity marks a seed that never reaches it
  std::vector<double> guided_crossings;
  std::vector<double> vanilla_crossings;
  double guided_median_steps = 0.0;
  double vanilla_median_steps = 0.0;
  bool reached = false;  // both medians finite
  double ratio = 0.0;    // guided/vanilla, meaningful only when reached
};

struct CompareReport {
  int smoothing_window = 10;
  double baseline_start = 0.0;  // vanilla median smoothed curve, first value
  double baseline_max = 0.0;    // and its maximum
  std::vector<LevelReport> levels;
};

// Sample-efficiency ratio table. Thresholds sit at x% of the vanilla
// baseline's smoothed improvement (start + x%·(max − start), median curve
// across vanilla seeds), which reduces to x%-of-max when rewards start near
// zero and keeps thresholds meaningful for negative reward scales. Crossings
// are found per seed and aggregated by median.
CompareReport efficiency_ratios(const std::vector<RunRecord>& guided,
                                const std::vector<RunRecord>& vanilla,
                                const std::vector<double>& levels = {85, 70, 50, 20},
                                int window = 10);
std::string compare_report_to_json(const CompareReport& report);

struct AblationReport {
  int smoothing_window = 10;
  double ablation_final_smoothed = 0.0;
  double guided_final_smoothed = 0.0;
  bool below_guided = false;  // informational over-fitting flag
};

AblationReport ablation_report(const std::vector<RunRecord>& ablation,
                               const std::vector<RunRecord>& guided,
                               int window = 10);
std::string ablation_report_to_json(const AblationReport& report);

struct CurveGroup {
  std::string label;
  std::vector<RunRecord> records;
};

// Deterministic SVG learning-curve chart: per-seed polylines, and for
// multi-seed groups a pointwise min/max band plus the median polyline.
std::string render_curves_svg(const std::vector<CurveGroup>& groups);
void emit_curves(const std::vector<CurveGroup>& groups, const std::string& out_path);

}  // namespace demoguide
