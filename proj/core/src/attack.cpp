#include "pixelprobe/attack.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pixelprobe/error.hpp"
#include "pixelprobe/random.hpp"

namespace pixelprobe {

namespace {

constexpr int kGenes = 5;  // x, y, r, g, b
using Genome = std::array<double, kGenes>;

struct SearchSpace {
  Genome lo{};
  Genome hi{};
  std::vector<std::uint8_t> color_values;

  SearchSpace(const Image& image, const ColorSet& colors)
      : color_values(colors.channel_values().begin(), colors.channel_values().end()) {
    const double top = static_cast<double>(color_values.size() - 1);
    hi = {static_cast<double>(image.width() - 1), static_cast<double>(image.height() - 1), top,
          top, top};
  }

  void clamp(Genome& g) const {
    for (int j = 0; j < kGenes; ++j) g[j] = std::clamp(g[j], lo[j], hi[j]);
  }

  /// Genes must already be clamped; rounds half to even (default FP mode).
  AttackVector decode(const Genome& g) const {
    auto idx = [&](int j) { return static_cast<std::size_t>(std::nearbyint(g[j])); };
    return {static_cast<std::uint32_t>(idx(0)), static_cast<std::uint32_t>(idx(1)),
            color_values[idx(2)], color_values[idx(3)], color_values[idx(4)]};
  }
};

bool crossed(Direction d, double best, const std::optional<double>& threshold) {
  return threshold && better(d, best, *threshold);
}

std::size_t best_index(Direction d, const std::vector<double>& fitness) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < fitness.size(); ++i)
    if (better(d, fitness[i], fitness[best])) best = i;
  return best;
}

}  // namespace

std::string_view to_string(Direction d) {
  return d == Direction::kMinimize ? "minimize" : "maximize";
}

Direction parse_direction(std::string_view text) {
  if (text == "minimize" || text == "min") return Direction::kMinimize;
  if (text == "maximize" || text == "max") return Direction::kMaximize;
  throw ParameterError("unknown attack direction \"" + std::string(text) +
                       "\" (expected minimize or maximize)");
}

void DEConfig::validate() const {
  if (population_size < 4) {
    throw ParameterError("population_size must be >= 4, got " + std::to_string(population_size));
  }
  if (generations < 0) throw ParameterError("generations must be >= 0");
  if (!(differential_weight > 0.0 && differential_weight <= 2.0)) {
    throw ParameterError("differential weight F must be in (0, 2], got " +
                         std::to_string(differential_weight));
  }
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
    throw ParameterError("crossover rate CR must be in [0, 1], got " +
                         std::to_string(crossover_rate));
  }
  if (color_step < 1 || color_step > 255) {
    throw ParameterError("color_step must be in [1, 255], got " + std::to_string(color_step));
  }
  if (neighborhood_radius < 1) throw ParameterError("neighborhood_radius must be >= 1");
}

bool is_success(const AttackRecord& record, const Thresholds& thresholds) {
  if (record.direction == Direction::kMinimize) {
    return record.modified_score < thresholds.min_threshold &&
           record.original_score >= thresholds.min_threshold;
  }
  return record.modified_score > thresholds.max_threshold &&
         record.original_score <= thresholds.max_threshold;
}

AttackRecord run_attack(const Image& image, Scorer& scorer, Direction direction,
                        const DEConfig& config, std::string image_id, AttackTrace* trace) {
  config.validate();
  if (image.empty()) throw DimensionError("cannot attack an empty image");

  const SearchSpace space(image, ColorSet(config.color_step));
  const auto np = static_cast<std::size_t>(config.population_size);
  const double original = scorer.score(image);

  SplitMix64 rng(config.seed);
  std::vector<Genome> population(np);
  for (Genome& g : population) {
    // Drawing from [lo - 0.5, hi + 0.5) gives every integer the same mass
    // after clamp-and-round.
    for (int j = 0; j < kGenes; ++j) g[j] = rng.uniform(space.lo[j] - 0.5, space.hi[j] + 0.5);
    space.clamp(g);
  }

  std::vector<AttackVector> vectors(np);
  auto evaluate = [&](const std::vector<Genome>& genomes) {
    for (std::size_t i = 0; i < np; ++i) vectors[i] = space.decode(genomes[i]);
    if (trace) trace->evaluations += np;
    return scorer.score_perturbations(image, vectors);
  };

  std::vector<double> fitness = evaluate(population);
  std::size_t best = best_index(direction, fitness);
  if (trace) trace->best_per_generation.push_back(fitness[best]);

  std::vector<Genome> trials(np);
  int generations_used = 0;
  const double f = config.differential_weight;
  while (generations_used < config.generations &&
         !crossed(direction, fitness[best], config.early_stop_threshold)) {
    for (std::size_t i = 0; i < np; ++i) {
      std::size_t a, b, c;
      do a = rng.index(np); while (a == i);
      do b = rng.index(np); while (b == i || b == a);
      do c = rng.index(np); while (c == i || c == a || c == b);
      const auto forced = static_cast<int>(rng.index(kGenes));
      Genome& t = trials[i];
      for (int j = 0; j < kGenes; ++j) {
        const double u = rng.uniform();
        t[j] = (u < config.crossover_rate || j == forced)
                   ? population[a][j] + f * (population[b][j] - population[c][j])
                   : population[i][j];
      }
      space.clamp(t);
    }

    const std::vector<double> trial_fitness = evaluate(trials);
    for (std::size_t i = 0; i < np; ++i) {
      if (!better(direction, fitness[i], trial_fitness[i])) {
        population[i] = trials[i];
        fitness[i] = trial_fitness[i];
      }
    }
    best = best_index(direction, fitness);
    ++generations_used;
    if (trace) trace->best_per_generation.push_back(fitness[best]);
  }

  AttackRecord record;
  record.image_id = std::move(image_id);
  record.direction = direction;
  record.original_score = original;
  record.vector = space.decode(population[best]);
  record.modified_score = fitness[best];
  if (better(direction, original, record.modified_score)) {
    const Rgb own = image(record.vector.x, record.vector.y);
    record.vector.r = own.r;
    record.vector.g = own.g;
    record.vector.b = own.b;
    record.modified_score = original;
  }
  if (image.pixel_count() > 1) {
    record.neighborhood_mean =
        neighborhood_mean(image, record.vector.x, record.vector.y, config.neighborhood_radius);
  } else {
    const Rgb p = image(0, 0);
    record.neighborhood_mean = {double(p.r), double(p.g), double(p.b)};
  }
  record.generations_used = generations_used;
  record.seed = config.seed;
  return record;
}

AttackRecord run_attack(const Image& image, const ScorerSpec& spec, Direction direction,
                        const DEConfig& config, std::string image_id) {
  config.validate();
  auto scorer = make_scorer(spec);
  return run_attack(image, *scorer, direction, config, std::move(image_id));
}

}  // namespace pixelprobe
