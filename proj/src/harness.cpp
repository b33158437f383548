#include "demoguide/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace demoguide {

namespace {

constexpr const char* kCsvHeader =
    "epoch,env_steps,mean_episode_reward,pi_loss,vf_loss,approx_kl,"
    "demo_frames_used";

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_double(double v, int precision, std::chars_format fmt) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, fmt, precision);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, const std::string& context) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("csv: bad number '" + std::string(s) + "' in " +
                                context);
  }
  return v;
}

long long parse_ll(std::string_view s, const std::string& context) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("csv: bad integer '" + std::string(s) + "' in " +
                                context);
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("short write to " + path);
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median: empty");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Vec reward_column(const RunRecord& rec) {
  Vec out(rec.rows.size());
  for (std::size_t i = 0; i < rec.rows.size(); ++i) {
    out[i] = rec.rows[i].mean_episode_reward;
  }
  return out;
}

void require_consistent(const std::vector<RunRecord>& records, const char* which) {
  if (records.empty()) {
    throw std::invalid_argument(std::string("efficiency_ratios: no ") + which +
                                " records");
  }
  const std::size_t rows = records[0].rows.size();
  if (rows == 0) {
    throw std::invalid_argument(std::string("efficiency_ratios: empty ") + which +
                                " record");
  }
  for (const RunRecord& r : records) {
    if (r.rows.size() != rows) {
      throw std::invalid_argument(std::string("efficiency_ratios: ") + which +
                                  " records have unequal lengths");
    }
  }
}

// first env_steps at which the smoothed rewards reach the threshold
double crossing_steps(const RunRecord& rec, const Vec& smoothed, double threshold) {
  for (std::size_t i = 0; i < smoothed.size(); ++i) {
    if (smoothed[i] >= threshold) {
      return static_cast<double>(rec.rows[i].env_steps);
    }
  }
  return std::numeric_limits<double>::infinity();
}

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::vanilla: return "vanilla";
    case Mode::guided: return "guided";
    case Mode::ablation_40: return "ablation_40";
  }
  throw std::invalid_argument("to_string: bad mode");
}

Mode mode_from_string(const std::string& s) {
  if (s == "vanilla") return Mode::vanilla;
  if (s == "guided") return Mode::guided;
  if (s == "ablation_40") return Mode::ablation_40;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

void ExperimentConfig::finalize() {
  switch (mode) {
    case Mode::vanilla:
      train.guidance.cutoff_epoch = 0;
      break;
    case Mode::guided:
      if (train.guidance.cutoff_epoch < 0) {
        train.guidance.cutoff_epoch = static_cast<int>(
            std::llround(0.3 * static_cast<double>(train.epochs)));
      }
      break;
    case Mode::ablation_40:
      train.guidance.demo_ratio = 0.4;
      train.guidance.cutoff_epoch = train.epochs;
      break;
  }
  check();
}

void ExperimentConfig::check() const {
  train.check();
  env_name_from_string(env);  // throws on unknown env
  if (mode != Mode::vanilla && demo_path.empty()) {
    throw std::invalid_argument("ExperimentConfig: mode '" + to_string(mode) +
                                "' requires a demo path");
  }
  if (seeds.empty()) throw std::invalid_argument("ExperimentConfig: no seeds");
  if (out_dir.empty()) throw std::invalid_argument("ExperimentConfig: no out_dir");
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_object()) {
    throw std::invalid_argument("experiment config: top level must be an object");
  }
  static const std::set<std::string> known = {
      "env",          "mode",        "demo",           "seeds",
      "out_dir",      "pi_lr",       "vf_lr",          "gamma",
      "lambda",       "clip_ratio",  "target_kl",      "update_iters",
      "epochs",       "steps_per_epoch", "guidance_weight",
      "k_obs",        "k_act",       "threshold_mode", "h_obs",
      "h_act",        "demo_ratio",  "cutoff_epoch",   "kmeans_max_iter"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) {
      throw std::invalid_argument("experiment config: unknown key '" +
                                  item.key() + "'");
    }
  }
  ExperimentConfig cfg;
  cfg.env = j.value("env", cfg.env);
  cfg.mode = mode_from_string(j.value("mode", to_string(cfg.mode)));
  cfg.demo_path = j.value("demo", cfg.demo_path);
  cfg.seeds = j.value("seeds", cfg.seeds);
  cfg.out_dir = j.value("out_dir", cfg.out_dir);

  TrainConfig& t = cfg.train;
  t.pi_lr = j.value("pi_lr", t.pi_lr);
  t.vf_lr = j.value("vf_lr", t.vf_lr);
  t.gamma = j.value("gamma", t.gamma);
  t.lam = j.value("lambda", t.lam);
  t.clip_ratio = j.value("clip_ratio", t.clip_ratio);
  t.target_kl = j.value("target_kl", t.target_kl);
  t.update_iters = j.value("update_iters", t.update_iters);
  t.epochs = j.value("epochs", t.epochs);
  t.steps_per_epoch = j.value("steps_per_epoch", t.steps_per_epoch);
  t.guidance_weight = j.value("guidance_weight", t.guidance_weight);

  GuidanceConfig& g = t.guidance;
  g.k_obs = j.value("k_obs", g.k_obs);
  g.k_act = j.value("k_act", g.k_act);
  const std::string mode_str =
      j.value("threshold_mode", std::string(g.threshold_mode ==
                                                    ThresholdMode::adaptive_median
                                                ? "adaptive_median"
                                                : "absolute"));
  if (mode_str == "adaptive_median") {
    g.threshold_mode = ThresholdMode::adaptive_median;
  } else if (mode_str == "absolute") {
    g.threshold_mode = ThresholdMode::absolute;
  } else {
    throw std::invalid_argument("unknown threshold_mode '" + mode_str + "'");
  }
  g.h_obs = j.value("h_obs", g.h_obs);
  g.h_act = j.value("h_act", g.h_act);
  g.demo_ratio = j.value("demo_ratio", g.demo_ratio);
  g.cutoff_epoch = j.value("cutoff_epoch", -1);  // -1 = resolve from mode
  g.kmeans_max_iter = j.value("kmeans_max_iter", g.kmeans_max_iter);
  return cfg;
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
  const TrainConfig& t = cfg.train;
  const GuidanceConfig& g = t.guidance;
  nlohmann::json j{
      {"env", cfg.env},
      {"mode", to_string(cfg.mode)},
      {"demo", cfg.demo_path},
      {"seeds", cfg.seeds},
      {"out_dir", cfg.out_dir},
      {"pi_lr", t.pi_lr},
      {"vf_lr", t.vf_lr},
      {"gamma", t.gamma},
      {"lambda", t.lam},
      {"clip_ratio", t.clip_ratio},
      {"target_kl", t.target_kl},
      {"update_iters", t.update_iters},
      {"epochs", t.epochs},
      {"steps_per_epoch", t.steps_per_epoch},
      {"guidance_weight", t.guidance_weight},
      {"k_obs", g.k_obs},
      {"k_act", g.k_act},
      {"threshold_mode", g.threshold_mode == ThresholdMode::adaptive_median
                             ? "adaptive_median"
                             : "absolute"},
      {"h_obs", g.h_obs},
      {"h_act", g.h_act},
      {"demo_ratio", g.demo_ratio},
      {"cutoff_epoch", g.cutoff_epoch},
      {"kmeans_max_iter", g.kmeans_max_iter}};
  return j.dump(2);
}

std::string run_record_to_csv(const RunRecord& record) {
  std::string out(kCsvHeader);
  out.push_back('\n');
  for (const EpochRow& r : record.rows) {
    out += std::to_string(r.epoch);
    out.push_back(',');
    out += std::to_string(r.env_steps);
    out.push_back(',');
    out += format_double(r.mean_episode_reward);
    out.push_back(',');
    out += format_double(r.pi_loss);
    out.push_back(',');
    out += format_double(r.vf_loss);
    out.push_back(',');
    out += format_double(r.approx_kl);
    out.push_back(',');
    out += std::to_string(r.demo_frames_used);
    out.push_back('\n');
  }
  return out;
}

RunRecord run_record_from_csv(const std::string& text) {
  RunRecord record;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string_view line(text.data() + start, end - start);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != kCsvHeader) {
        throw std::invalid_argument("csv: unexpected header '" + std::string(line) +
                                    "'");
      }
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 7) {
      throw std::invalid_argument("csv: line " + std::to_string(line_no) +
                                  " has " + std::to_string(fields.size()) +
                                  " fields, want 7");
    }
    const std::string ctx = "line " + std::to_string(line_no);
    EpochRow row;
    row.epoch = static_cast<int>(parse_ll(fields[0], ctx));
    row.env_steps = parse_ll(fields[1], ctx);
    row.mean_episode_reward = parse_double(fields[2], ctx);
    row.pi_loss = parse_double(fields[3], ctx);
    row.vf_loss = parse_double(fields[4], ctx);
    row.approx_kl = parse_double(fields[5], ctx);
    row.demo_frames_used = static_cast<int>(parse_ll(fields[6], ctx));
    record.rows.push_back(row);
  }
  if (record.rows.empty()) throw std::invalid_argument("csv: no data rows");
  return record;
}

void write_run_csv(const std::string& path, const RunRecord& record) {
  write_text_file(path, run_record_to_csv(record));
}

RunRecord read_run_csv(const std::string& path) {
  return run_record_from_csv(read_text_file(path));
}

bool ExperimentResult::all_ok() const {
  for (const SeedOutcome& s : seeds) {
    if (!s.ok) return false;
  }
  return !seeds.empty();
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::string& dump_clusters_dir) {
  cfg.check();
  const EnvSpec env = EnvSpec::make(cfg.env);
  std::filesystem::create_directories(cfg.out_dir);
  if (!dump_clusters_dir.empty()) {
    std::filesystem::create_directories(dump_clusters_dir);
  }

  std::optional<DemoDataset> demo;
  if (cfg.mode != Mode::vanilla) {
    DemoDataset loaded = load_demo(cfg.demo_path);
    const ValidationReport report = validate(loaded, env);
    if (!report.pass) {
      std::string msg = "demo validation failed:";
      for (const std::string& f : report.failures) msg += "\n  " + f;
      throw std::runtime_error(msg);
    }
    demo = std::move(loaded);
  }

  const std::string prefix = to_string(cfg.mode) + "_seed";
  ExperimentResult result;
  for (const unsigned long long seed : cfg.seeds) {
    SeedOutcome outcome;
    outcome.seed = seed;
    const std::string stem =
        (std::filesystem::path(cfg.out_dir) / (prefix + std::to_string(seed)))
            .string();
    try {
      TrainConfig t = cfg.train;
      t.seed = seed;
      Trainer trainer(env, t, demo);
      if (!dump_clusters_dir.empty()) {
        const std::string cluster_stem =
            (std::filesystem::path(dump_clusters_dir) /
             (prefix + std::to_string(seed)))
                .string();
        trainer.set_cluster_hook([cluster_stem](int epoch_index,
                                                const ClusterModel& obs_model,
                                                const ClusterModel& act_model) {
          const std::string tag = cluster_stem + "_epoch" +
                                  std::to_string(epoch_index + 1);
          write_text_file(tag + "_obs.json", cluster_model_to_json(obs_model));
          write_text_file(tag + "_act.json", cluster_model_to_json(act_model));
        });
      }
      outcome.record = trainer.run();
      outcome.csv_path = stem + ".csv";
      write_run_csv(outcome.csv_path, outcome.record);
      outcome.checkpoint_path = stem + "_final.json";
      save_checkpoint(outcome.checkpoint_path, cfg.env, trainer.policy(),
                      trainer.critic());
      outcome.ok = true;
    } catch (const std::exception& ex) {
      outcome.ok = false;
      outcome.error = ex.what();
      write_text_file(stem + ".error.txt", std::string(ex.what()) + "\n");
    }
    result.seeds.push_back(std::move(outcome));
  }
  return result;
}

Vec smooth(const Vec& values, int window) {
  if (window < 1) throw std::invalid_argument("smooth: window must be >= 1");
  Vec out(values.size());
  double running = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    running += values[i];
    if (i >= static_cast<std::size_t>(window)) {
      running -= values[i - static_cast<std::size_t>(window)];
    }
    const auto n = std::min<std::size_t>(i + 1, static_cast<std::size_t>(window));
    out[i] = running / static_cast<double>(n);
  }
  return out;
}

CompareReport efficiency_ratios(const std::vector<RunRecord>& guided,
                                const std::vector<RunRecord>& vanilla,
                                const std::vector<double>& levels, int window) {
  require_consistent(guided, "guided");
  require_consistent(vanilla, "vanilla");

  std::vector<Vec> vanilla_smoothed;
  vanilla_smoothed.reserve(vanilla.size());
  for (const RunRecord& r : vanilla) {
    vanilla_smoothed.push_back(smooth(reward_column(r), window));
  }
  std::vector<Vec> guided_smoothed;
  guided_smoothed.reserve(guided.size());
  for (const RunRecord& r : guided) {
    guided_smoothed.push_back(smooth(reward_column(r), window));
  }

  // pointwise median over vanilla seeds anchors the thresholds
  const std::size_t rows = vanilla_smoothed[0].size();
  Vec baseline(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<double> column;
    column.reserve(vanilla_smoothed.size());
    for (const Vec& curve : vanilla_smoothed) column.push_back(curve[i]);
    baseline[i] = median(std::move(column));
  }

  CompareReport report;
  report.smoothing_window = window;
  report.baseline_start = baseline[0];
  report.baseline_max = *std::max_element(baseline.begin(), baseline.end());

  for (const double pct : levels) {
    LevelReport level;
    level.level_pct = pct;
    level.threshold = report.baseline_start +
                      (pct / 100.0) * (report.baseline_max - report.baseline_start);
    for (std::size_t s = 0; s < guided.size(); ++s) {
      level.guided_crossings.push_back(
          crossing_steps(guided[s], guided_smoothed[s], level.threshold));
    }
    for (std::size_t s = 0; s < vanilla.size(); ++s) {
      level.vanilla_crossings.push_back(
          crossing_steps(vanilla[s], vanilla_smoothed[s], level.threshold));
    }
    level.guided_median_steps = median(level.guided_crossings);
    level.vanilla_median_steps = median(level.vanilla_crossings);
    level.reached = std::isfinite(level.guided_median_steps) &&
                    std::isfinite(level.vanilla_median_steps);
    if (level.reached) {
      level.ratio = level.guided_median_steps / level.vanilla_median_steps;
    }
    report.levels.push_back(std::move(level));
  }
  return report;
}

std::string compare_report_to_json(const CompareReport& report) {
  nlohmann::json levels = nlohmann::json::array();
  for (const LevelReport& level : report.levels) {
    nlohmann::json guided_crossings = nlohmann::json::array();
    for (double c : level.guided_crossings) guided_crossings.push_back(finite_or_null(c));
    nlohmann::json vanilla_crossings = nlohmann::json::array();
    for (double c : level.vanilla_crossings) {
      vanilla_crossings.push_back(finite_or_null(c));
    }
    levels.push_back(
        {{"level_pct", level.level_pct},
         {"threshold", level.threshold},
         {"guided_crossings", guided_crossings},
         {"vanilla_crossings", vanilla_crossings},
         {"guided_median_steps", finite_or_null(level.guided_median_steps)},
         {"vanilla_median_steps", finite_or_null(level.vanilla_median_steps)},
         {"reached", level.reached},
         {"ratio", level.reached ? nlohmann::json(level.ratio)
                                 : nlohmann::json(nullptr)}});
  }
  const nlohmann::json j{{"smoothing_window", report.smoothing_window},
                         {"baseline_start", report.baseline_start},
                         {"baseline_max", report.baseline_max},
                         {"levels", levels}};
  return j.dump(2);
}

AblationReport ablation_report(const std::vector<RunRecord>& ablation,
                               const std::vector<RunRecord>& guided, int window) {
  const auto final_smoothed = [window](const std::vector<RunRecord>& records) {
    if (records.empty()) {
      throw std::invalid_argument("ablation_report: empty record set");
    }
    std::vector<double> finals;
    finals.reserve(records.size());
    for (const RunRecord& r : records) {
      if (r.rows.empty()) {
        throw std::invalid_argument("ablation_report: empty record");
      }
      finals.push_back(smooth(reward_column(r), window).back());
    }
    return median(std::move(finals));
  };
  AblationReport report;
  report.smoothing_window = window;
  report.ablation_final_smoothed = final_smoothed(ablation);
  report.guided_final_smoothed = final_smoothed(guided);
  report.below_guided =
      report.ablation_final_smoothed < report.guided_final_smoothed;
  return report;
}

std::string ablation_report_to_json(const AblationReport& report) {
  const nlohmann::json j{
      {"smoothing_window", report.smoothing_window},
      {"ablation_final_smoothed", report.ablation_final_smoothed},
      {"guided_final_smoothed", report.guided_final_smoothed},
      {"below_guided", report.below_guided}};
  return j.dump(2);
}

namespace {

constexpr double kSvgWidth = 800.0;
constexpr double kSvgHeight = 500.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 20.0;
constexpr double kMarginBottom = 50.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string coord(double v) { return format_double(v, 2, std::chars_format::fixed); }
std::string tick_label(double v) {
  return format_double(v, 4, std::chars_format::general);
}

}  // namespace

std::string render_curves_svg(const std::vector<CurveGroup>& groups) {
  if (groups.empty()) throw std::invalid_argument("render_curves_svg: no groups");
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const CurveGroup& g : groups) {
    if (g.records.empty()) {
      throw std::invalid_argument("render_curves_svg: group '" + g.label +
                                  "' has no records");
    }
    for (const RunRecord& r : g.records) {
      if (r.rows.empty()) {
        throw std::invalid_argument("render_curves_svg: empty record in group '" +
                                    g.label + "'");
      }
      for (const EpochRow& row : r.rows) {
        xmin = std::min(xmin, static_cast<double>(row.env_steps));
        xmax = std::max(xmax, static_cast<double>(row.env_steps));
        ymin = std::min(ymin, row.mean_episode_reward);
        ymax = std::max(ymax, row.mean_episode_reward);
      }
    }
  }
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  const double plot_w = kSvgWidth - kMarginLeft - kMarginRight;
  const double plot_h = kSvgHeight - kMarginTop - kMarginBottom;
  const auto sx = [&](double v) {
    return kMarginLeft + (v - xmin) / (xmax - xmin) * plot_w;
  };
  const auto sy = [&](double v) {
    return kMarginTop + (1.0 - (v - ymin) / (ymax - ymin)) * plot_h;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
         "viewBox=\"0 0 800 500\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";

  // axes
  svg += "<line x1=\"" + coord(kMarginLeft) + "\" y1=\"" + coord(kMarginTop) +
         "\" x2=\"" + coord(kMarginLeft) + "\" y2=\"" +
         coord(kMarginTop + plot_h) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + coord(kMarginLeft) + "\" y1=\"" +
         coord(kMarginTop + plot_h) + "\" x2=\"" + coord(kMarginLeft + plot_w) +
         "\" y2=\"" + coord(kMarginTop + plot_h) + "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = xmin + (xmax - xmin) * t / 4.0;
    const double fy = ymin + (ymax - ymin) * t / 4.0;
    svg += "<text x=\"" + coord(sx(fx)) + "\" y=\"" +
           coord(kMarginTop + plot_h + 18.0) +
           "\" font-size=\"11\" text-anchor=\"middle\">" + tick_label(fx) +
           "</text>\n";
    svg += "<text x=\"" + coord(kMarginLeft - 6.0) + "\" y=\"" +
           coord(sy(fy) + 4.0) + "\" font-size=\"11\" text-anchor=\"end\">" +
           tick_label(fy) + "</text>\n";
  }
  svg += "<text x=\"" + coord(kMarginLeft + plot_w / 2.0) + "\" y=\"" +
         coord(kSvgHeight - 10.0) +
         "\" font-size=\"13\" text-anchor=\"middle\">env steps</text>\n";
  svg += "<text x=\"16\" y=\"" + coord(kMarginTop + plot_h / 2.0) +
         "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         coord(kMarginTop + plot_h / 2.0) +
         ")\">mean episode reward</text>\n";

  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const CurveGroup& g = groups[gi];
    const char* color = kPalette[gi % kPaletteSize];
    const std::size_t rows = g.records[0].rows.size();
    for (const RunRecord& r : g.records) {
      if (r.rows.size() != rows) {
        throw std::invalid_argument("render_curves_svg: unequal record lengths in "
                                    "group '" + g.label + "'");
      }
    }

    if (g.records.size() > 1) {
      // pointwise min/max band and median line across seeds
      std::string band = "<polygon fill=\"" + std::string(color) +
                         "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
      Vec med(rows);
      for (std::size_t i = 0; i < rows; ++i) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        std::vector<double> column;
        column.reserve(g.records.size());
        for (const RunRecord& r : g.records) {
          const double v = r.rows[i].mean_episode_reward;
          lo = std::min(lo, v);
          hi = std::max(hi, v);
          column.push_back(v);
        }
        med[i] = median(std::move(column));
        band += coord(sx(static_cast<double>(g.records[0].rows[i].env_steps))) +
                "," + coord(sy(hi)) + " ";
        (void)lo;
      }
      for (std::size_t i = rows; i-- > 0;) {
        double lo = std::numeric_limits<double>::infinity();
        for (const RunRecord& r : g.records) {
          lo = std::min(lo, r.rows[i].mean_episode_reward);
        }
        band += coord(sx(static_cast<double>(g.records[0].rows[i].env_steps))) +
                "," + coord(sy(lo));
        if (i != 0) band += " ";
      }
      band += "\"/>\n";
      svg += band;

      std::string medline = "<polyline fill=\"none\" stroke=\"" +
                            std::string(color) + "\" stroke-width=\"2\" points=\"";
      for (std::size_t i = 0; i < rows; ++i) {
        medline += coord(sx(static_cast<double>(g.records[0].rows[i].env_steps))) +
                   "," + coord(sy(med[i]));
        if (i + 1 != rows) medline += " ";
      }
      medline += "\"/>\n";
      svg += medline;
    }

    const char* seed_width = g.records.size() > 1 ? "1" : "2";
    const char* seed_opacity = g.records.size() > 1 ? "0.35" : "1";
    for (const RunRecord& r : g.records) {
      std::string line = "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                         "\" stroke-width=\"" + seed_width +
                         "\" stroke-opacity=\"" + seed_opacity + "\" points=\"";
      for (std::size_t i = 0; i < r.rows.size(); ++i) {
        line += coord(sx(static_cast<double>(r.rows[i].env_steps))) + "," +
                coord(sy(r.rows[i].mean_episode_reward));
        if (i + 1 != r.rows.size()) line += " ";
      }
      line += "\"/>\n";
      svg += line;
    }

    svg += "<text x=\"" + coord(kMarginLeft + plot_w - 8.0) + "\" y=\"" +
           coord(kMarginTop + 16.0 + 16.0 * static_cast<double>(gi)) +
           "\" font-size=\"12\" text-anchor=\"end\" fill=\"" + color + "\">" +
           g.label + "</text>\n";
  }

  svg += "</svg>\n";
  return svg;
}

void emit_curves(const std::vector<CurveGroup>& groups, const std::string& out_path) {
  write_text_file(out_path, render_curves_svg(groups));
}

}  // namespace demoguide
