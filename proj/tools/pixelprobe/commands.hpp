#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pixelprobe::cli {

struct AttackOptions {
  std::vector<std::string> images;
  std::string scorer = "spotnet";
  std::string direction = "minimize";
  int population = 200;
  int generations = 100;
  double differential_weight = 0.5;
  double crossover_rate = 0.8;
  std::uint64_t seed = 0;
  std::optional<double> early_stop;
  int color_step = 1;
  int radius = 1;
  double min_threshold = 0.9;
  double max_threshold = 0.1;
  std::string output;
  std::string successes;
  unsigned workers = 1;
};

struct ConfmapOptions {
  std::string image;
  std::string scorer = "spotnet";
  int color_step = 5;
  std::string output;
  std::string csv;
  std::string checkpoint;
  std::uint64_t checkpoint_every = 64;
  bool resume = false;
  std::optional<std::uint64_t> halt_after;
  bool plan_only = false;
  unsigned workers = 1;
  std::size_t batch_size = 4096;
};

struct AnalyzeOptions {
  std::string which;
  std::vector<std::string> inputs;
  std::string output;
  std::uint32_t width = 64;
  std::uint32_t height = 64;
  bool successes_only = false;
  double min_threshold = 0.9;
  double max_threshold = 0.1;
  double swing_fraction = 0.5;
};

struct RenderOptionsCli {
  std::string input;
  std::string output;
  std::string mode = "swing";
  int scale = 1;
  std::string range;
};

struct ScorerCheckOptions {
  std::string scorer;
};

int run_attack_command(const AttackOptions& o);
int run_confmap_command(const ConfmapOptions& o);
int run_analyze_command(const AnalyzeOptions& o);
int run_render_command(const RenderOptionsCli& o);
int run_scorer_check_command(const ScorerCheckOptions& o);

}  // namespace pixelprobe::cli
