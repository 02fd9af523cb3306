#include "pixelprobe/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "network_kernels.hpp"
#include "pixelprobe/error.hpp"

namespace pixelprobe {

// ---------------------------------------------------------------------------
// ScorerSpec

ScorerSpec ScorerSpec::builtin(std::string weights_source) {
  return {Kind::kBuiltin, std::move(weights_source)};
}

ScorerSpec ScorerSpec::external(std::string command) {
  return {Kind::kExternal, std::move(command)};
}

ScorerSpec ScorerSpec::parse(std::string_view text) {
  constexpr std::string_view kBuiltin = "builtin:";
  constexpr std::string_view kExternal = "external:";
  ScorerSpec spec;
  if (text.starts_with(kExternal)) {
    spec = external(std::string(text.substr(kExternal.size())));
  } else if (text.starts_with(kBuiltin)) {
    spec = builtin(std::string(text.substr(kBuiltin.size())));
  } else {
    spec = builtin(std::string(text));
  }
  if (spec.source.empty()) throw ConfigError("empty scorer source in \"" + std::string(text) + "\"");
  return spec;
}

std::string ScorerSpec::to_string() const {
  return (kind == Kind::kBuiltin ? "builtin:" : "external:") + source;
}

// ---------------------------------------------------------------------------
// Scorer

std::vector<double> Scorer::score_batch(std::span<const Image> images) {
  std::vector<double> out(images.size());
  if (images.empty()) return out;
  const auto w = images.front().width();
  const auto h = images.front().height();
  for (const Image& img : images) {
    if (img.width() != w || img.height() != h) {
      throw DimensionError("batch mixes " + std::to_string(w) + "x" + std::to_string(h) +
                           " and " + std::to_string(img.width()) + "x" +
                           std::to_string(img.height()) + " images");
    }
  }
  do_score_batch(images, out);
  check_scores(out);
  return out;
}

std::vector<double> Scorer::score_perturbations(const Image& base,
                                                std::span<const AttackVector> vectors) {
  for (const AttackVector& v : vectors) {
    if (!base.contains(v.x, v.y)) {
      throw BoundsError("perturbation at (" + std::to_string(v.x) + ", " + std::to_string(v.y) +
                        ") outside image");
    }
  }
  std::vector<double> out(vectors.size());
  if (vectors.empty()) return out;
  do_score_perturbations(base, vectors, out);
  check_scores(out);
  return out;
}

double Scorer::score(const Image& image) {
  return score_batch(std::span<const Image>(&image, 1)).front();
}

void Scorer::do_score_perturbations(const Image& base, std::span<const AttackVector> vectors,
                                    std::span<double> out) {
  std::vector<Image> images;
  images.reserve(vectors.size());
  for (const AttackVector& v : vectors) images.push_back(apply_attack(base, v));
  do_score_batch(images, out);
}

void Scorer::check_scores(std::span<const double> scores) const {
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double s = scores[i];
    if (!std::isfinite(s)) {
      throw ContractViolation("scorer " + id() + " returned a non-finite score at batch index " +
                              std::to_string(i));
    }
    if (s < 0.0 || s > 1.0) {
      throw ContractViolation("scorer " + id() + " returned " + std::to_string(s) +
                              " (outside [0, 1]) at batch index " + std::to_string(i));
    }
  }
}

// ---------------------------------------------------------------------------
// BuiltinScorer

struct BuiltinScorer::Cache {
  Image base;
  detail::Shape shape{};
  std::vector<double> input;
  std::vector<double> conv1;
  std::vector<double> conv2;
  double base_score = 0.0;

  // Scratch for restoring patched activations.
  std::vector<double> saved1;
  std::vector<double> saved2;

  void reset(const NetworkWeights& w, const Image& image) {
    base = image;
    shape = detail::Shape::of(image);
    detail::load_input(image, input);
    detail::conv1_full(w, input.data(), shape, conv1);
    detail::conv2_full(w, conv1.data(), shape, conv2);
    base_score = detail::head(w, conv2.data(), shape);
  }

  double perturbed(const NetworkWeights& w, const AttackVector& v) {
    using detail::kC;
    const Rgb old = base(v.x, v.y);
    if (old == v.color()) return base_score;
    const auto& s = shape;
    const int x = static_cast<int>(v.x);
    const int y = static_cast<int>(v.y);

    double* px = &input[(static_cast<std::size_t>(y) * s.w0 + x) * 3];
    px[0] = detail::channel_value(v.r);
    px[1] = detail::channel_value(v.g);
    px[2] = detail::channel_value(v.b);

    int y1lo, y1hi, x1lo, x1hi;
    detail::affected_range(y, s.h1, y1lo, y1hi);
    detail::affected_range(x, s.w1, x1lo, x1hi);
    const int y2lo = y1lo / 2, y2hi = std::min((y1hi + 1) / 2, s.h2 - 1);
    const int x2lo = x1lo / 2, x2hi = std::min((x1hi + 1) / 2, s.w2 - 1);

    saved1.clear();
    for (int oy = y1lo; oy <= y1hi; ++oy) {
      for (int ox = x1lo; ox <= x1hi; ++ox) {
        double* a = &conv1[(static_cast<std::size_t>(oy) * s.w1 + ox) * kC];
        saved1.insert(saved1.end(), a, a + kC);
        detail::conv1_at(w, input.data(), s, oy, ox, a);
      }
    }
    saved2.clear();
    for (int oy = y2lo; oy <= y2hi; ++oy) {
      for (int ox = x2lo; ox <= x2hi; ++ox) {
        double* a = &conv2[(static_cast<std::size_t>(oy) * s.w2 + ox) * kC];
        saved2.insert(saved2.end(), a, a + kC);
        detail::conv2_at(w, conv1.data(), s, oy, ox, a);
      }
    }

    const double score = detail::head(w, conv2.data(), s);

    // Restore the base activations.
    const double* r2 = saved2.data();
    for (int oy = y2lo; oy <= y2hi; ++oy)
      for (int ox = x2lo; ox <= x2hi; ++ox, r2 += kC)
        std::copy(r2, r2 + kC, &conv2[(static_cast<std::size_t>(oy) * s.w2 + ox) * kC]);
    const double* r1 = saved1.data();
    for (int oy = y1lo; oy <= y1hi; ++oy)
      for (int ox = x1lo; ox <= x1hi; ++ox, r1 += kC)
        std::copy(r1, r1 + kC, &conv1[(static_cast<std::size_t>(oy) * s.w1 + ox) * kC]);
    px[0] = detail::channel_value(old.r);
    px[1] = detail::channel_value(old.g);
    px[2] = detail::channel_value(old.b);
    return score;
  }
};

BuiltinScorer::BuiltinScorer(NetworkWeights weights, std::string name)
    : weights_(std::make_shared<const NetworkWeights>(std::move(weights))),
      name_(std::move(name)),
      cache_(std::make_unique<Cache>()) {
  if (!weights_->all_finite()) throw ConfigError("builtin weights contain non-finite values");
}

BuiltinScorer::BuiltinScorer(std::string_view weights_source)
    : BuiltinScorer(load_weights(weights_source), std::string(weights_source)) {}

BuiltinScorer::~BuiltinScorer() = default;

std::string BuiltinScorer::id() const { return "builtin:" + name_; }

std::unique_ptr<Scorer> BuiltinScorer::fork() const {
  auto copy = std::unique_ptr<BuiltinScorer>(new BuiltinScorer(*weights_, name_));
  copy->weights_ = weights_;
  return copy;
}

void BuiltinScorer::do_score_batch(std::span<const Image> images, std::span<double> out) {
  for (std::size_t i = 0; i < images.size(); ++i) out[i] = builtin_forward(*weights_, images[i]);
}

void BuiltinScorer::do_score_perturbations(const Image& base,
                                           std::span<const AttackVector> vectors,
                                           std::span<double> out) {
  if (base.empty()) throw DimensionError("builtin network needs a non-empty image");
  if (!(cache_->base == base)) cache_->reset(*weights_, base);
  for (std::size_t i = 0; i < vectors.size(); ++i) out[i] = cache_->perturbed(*weights_, vectors[i]);
}

// ---------------------------------------------------------------------------
// FunctionScorer

FunctionScorer::FunctionScorer(Function fn, std::string name)
    : fn_(std::move(fn)), name_(std::move(name)) {}

std::unique_ptr<Scorer> FunctionScorer::fork() const {
  return std::make_unique<FunctionScorer>(fn_, name_);
}

void FunctionScorer::do_score_batch(std::span<const Image> images, std::span<double> out) {
  for (std::size_t i = 0; i < images.size(); ++i) out[i] = fn_(images[i]);
}

// ---------------------------------------------------------------------------

std::unique_ptr<Scorer> make_scorer(const ScorerSpec& spec) {
  if (spec.kind == ScorerSpec::Kind::kExternal) return std::make_unique<ExternalScorer>(spec.source);
  return std::make_unique<BuiltinScorer>(spec.source);
}

std::vector<double> score_batch(const ScorerSpec& spec, std::span<const Image> images) {
  return make_scorer(spec)->score_batch(images);
}

}  // namespace pixelprobe
