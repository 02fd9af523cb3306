#include <charconv>
#include <cstdlib>
#include <iostream>
#include <string_view>

#include "CLI11.hpp"
#include "commands.hpp"
#include "pixelprobe/error.hpp"

namespace pixelprobe::cli {

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2, kScorer = 3 };

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kBounds:
    case ErrorKind::kParameter:
    case ErrorKind::kConfig:
      return kUsage;
    case ErrorKind::kScorerProtocol:
    case ErrorKind::kContractViolation:
      return kScorer;
    default:
      return kIo;
  }
}

}  // namespace pixelprobe::cli

namespace {

using namespace pixelprobe::cli;

bool seed_on_command_line(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string_view a(argv[i]);
    if (a == "--seed" || a.starts_with("--seed=")) return true;
  }
  return false;
}

// PIXELPROBE_SEED beats the config file but not an explicit --seed.
void apply_seed_env(int argc, char** argv, std::uint64_t& seed) {
  const char* env = std::getenv("PIXELPROBE_SEED");
  if (!env || seed_on_command_line(argc, argv)) return;
  const std::string_view text(env);
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw pixelprobe::ConfigError("PIXELPROBE_SEED must be an unsigned integer, got \"" +
                                  std::string(text) + "\"");
  }
  seed = v;
}

void add_scorer(CLI::App* cmd, std::string& target) {
  cmd->add_option("-s,--scorer", target,
                  "builtin:<spotnet|random:N|weights.json> or external:<command>")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-pixel attacks and confidence maps for black-box image scorers"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value config file");
  app.set_version_flag("--version", "pixelprobe 0.1.0");

  AttackOptions attack;
  auto* a = app.add_subcommand("attack", "Run one-pixel DE attacks and write JSONL records");
  a->add_option("images", attack.images, "Input PNG images")->required();
  add_scorer(a, attack.scorer);
  a->add_option("-d,--direction", attack.direction, "minimize or maximize")
      ->check(CLI::IsMember({"minimize", "maximize", "min", "max"}))
      ->capture_default_str();
  a->add_option("-p,--population", attack.population, "Population size")->capture_default_str();
  a->add_option("-g,--generations", attack.generations, "Generations")->capture_default_str();
  a->add_option("-F,--differential-weight", attack.differential_weight)->capture_default_str();
  a->add_option("--cr,--crossover-rate", attack.crossover_rate)->capture_default_str();
  a->add_option("--seed", attack.seed, "Base seed; image i uses seed + i (env PIXELPROBE_SEED)")
      ->capture_default_str();
  a->add_option("--early-stop", attack.early_stop, "Stop once the best score crosses this value");
  a->add_option("--color-step", attack.color_step, "Restrict colors to multiples of this step")
      ->capture_default_str();
  a->add_option("--radius", attack.radius, "Neighborhood radius stored in records")->capture_default_str();
  a->add_option("--min-threshold", attack.min_threshold)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  a->add_option("--max-threshold", attack.max_threshold)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  a->add_option("-o,--output", attack.output, "Records file (JSONL)")->required();
  a->add_option("--successes", attack.successes, "Also write successful records here");
  a->add_option("-j,--workers", attack.workers, "Images attacked in parallel")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  ConfmapOptions confmap;
  auto* c = app.add_subcommand("confmap", "Brute-force a per-pixel confidence map");
  c->add_option("image", confmap.image, "Input PNG image")->required();
  add_scorer(c, confmap.scorer);
  c->add_option("--step,--color-step", confmap.color_step, "Color grid step")->capture_default_str();
  c->add_option("-o,--output", confmap.output, "Map file (OPCM)");
  c->add_option("--csv", confmap.csv, "Also write x,y,min,max,avg CSV");
  c->add_option("--checkpoint", confmap.checkpoint, "Checkpoint path (default <output>.ckpt)");
  c->add_option("--checkpoint-every", confmap.checkpoint_every, "Pixels between checkpoints")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c->add_flag("--resume", confmap.resume, "Continue from the checkpoint");
  c->add_option("--halt-after", confmap.halt_after, "Stop after this many pixels (checkpoint kept)");
  c->add_flag("--plan-only", confmap.plan_only, "Print the planned vector count and exit");
  c->add_option("-j,--workers", confmap.workers)->check(CLI::PositiveNumber)->capture_default_str();
  c->add_option("--batch-size", confmap.batch_size)->check(CLI::PositiveNumber)->capture_default_str();

  AnalyzeOptions analyze;
  auto* an = app.add_subcommand("analyze", "Chromatic, spatial, parity, placement and checkerboard analyses");
  an->add_option("analysis", analyze.which)
      ->required()
      ->check(CLI::IsMember({"chromatic", "spatial", "parity", "placement", "checkerboard"}));
  an->add_option("inputs", analyze.inputs, "Record files (JSONL), or map files for checkerboard")
      ->required();
  an->add_option("-o,--output", analyze.output, "Output CSV (default stdout)");
  an->add_option("--width", analyze.width, "Placement grid width")->capture_default_str();
  an->add_option("--height", analyze.height, "Placement grid height")->capture_default_str();
  an->add_flag("--successes-only", analyze.successes_only, "Keep only successful attacks");
  an->add_option("--min-threshold", analyze.min_threshold)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  an->add_option("--max-threshold", analyze.max_threshold)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  an->add_option("--swing-fraction", analyze.swing_fraction, "High-swing cutoff relative to the largest swing")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();

  RenderOptionsCli render;
  auto* r = app.add_subcommand("render", "Render a map or placement grid as a heatmap PNG");
  r->add_option("input", render.input, "Map file, or placement CSV for --mode counts")->required();
  r->add_option("-o,--output", render.output, "Output PNG")->required();
  r->add_option("-m,--mode", render.mode)
      ->check(CLI::IsMember({"min", "max", "avg", "swing", "counts"}))
      ->capture_default_str();
  r->add_option("--scale", render.scale, "Integer upscale factor")->check(CLI::PositiveNumber)->capture_default_str();
  r->add_option("--range", render.range, "Fixed normalization range lo,hi");

  ScorerCheckOptions check;
  auto* sc = app.add_subcommand("scorer-check", "Validate a scorer against the wire protocol");
  add_scorer(sc, check.scorer);
  sc->get_option("--scorer")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (a->parsed()) {
      apply_seed_env(argc, argv, attack.seed);
      return run_attack_command(attack);
    }
    if (c->parsed()) return run_confmap_command(confmap);
    if (an->parsed()) return run_analyze_command(analyze);
    if (r->parsed()) return run_render_command(render);
    if (sc->parsed()) return run_scorer_check_command(check);
  } catch (const pixelprobe::Error& e) {
    std::cerr << "pixelprobe: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "pixelprobe: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "pixelprobe: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}
