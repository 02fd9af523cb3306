#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pixelprobe/image.hpp"
#include "pixelprobe/scorer.hpp"

namespace pixelprobe {

/// kMinimize drives the score down (mitosis-to-normal), kMaximize up
/// (normal-to-mitosis).
enum class Direction { kMinimize, kMaximize };

std::string_view to_string(Direction d);
/// Accepts "minimize"/"maximize" (also "min"/"max"); ParameterError otherwise.
Direction parse_direction(std::string_view text);

/// True when `candidate` is strictly better than `incumbent` in direction d.
constexpr bool better(Direction d, double candidate, double incumbent) {
  return d == Direction::kMinimize ? candidate < incumbent : candidate > incumbent;
}

/// DE/rand/1/bin settings.
struct DEConfig {
  int population_size = 200;
  int generations = 100;
  double differential_weight = 0.5;  // F
  double crossover_rate = 0.8;       // CR
  std::uint64_t seed = 0;
  /// Stop once the best score crosses this value in the attack direction.
  std::optional<double> early_stop_threshold;
  /// Colors are restricted to color_grid(color_step); 1 searches all 256^3.
  int color_step = 1;
  /// Radius of the neighborhood stored in the record.
  int neighborhood_radius = 1;

  /// Throws ParameterError on population_size < 4, generations < 0,
  /// F outside (0, 2], CR outside [0, 1], or color_step outside [1, 255].
  void validate() const;
};

struct AttackRecord {
  std::string image_id;
  Direction direction = Direction::kMinimize;
  double original_score = 0.0;
  double modified_score = 0.0;
  AttackVector vector;
  std::array<double, 3> neighborhood_mean{};
  int generations_used = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const AttackRecord&, const AttackRecord&) = default;
};

struct Thresholds {
  double min_threshold = 0.9;
  double max_threshold = 0.1;
};

/// Minimize succeeds when the score fell below min_threshold from at or above
/// it; maximize when it rose above max_threshold from at or below it.
bool is_success(const AttackRecord& record, const Thresholds& thresholds = {});

/// Optional diagnostics from run_attack.
struct AttackTrace {
  /// Population best after initialization (index 0) and after each generation.
  std::vector<double> best_per_generation;
  std::uint64_t evaluations = 0;
};

/// Runs a one-pixel DE attack. Candidates are (x, y, r, g, b) reals, clamped
/// to bounds and rounded half-to-even before evaluation. Each generation's
/// trials are scored in a single batch. If the best candidate is worse than
/// the unperturbed image, the record carries the identity perturbation.
///
/// Draw order from SplitMix64(config.seed): initialization draws x, y, r, g, b
/// per member in population order; each generation then draws, per target in
/// population order, partners a, b, c (rejection-sampled to be distinct from
/// each other and the target), the forced gene index, and five crossover
/// uniforms.
AttackRecord run_attack(const Image& image, Scorer& scorer, Direction direction,
                        const DEConfig& config, std::string image_id = {},
                        AttackTrace* trace = nullptr);

AttackRecord run_attack(const Image& image, const ScorerSpec& spec, Direction direction,
                        const DEConfig& config, std::string image_id = {});

}  // namespace pixelprobe
