#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pixelprobe/image.hpp"
#include "pixelprobe/network.hpp"

namespace pixelprobe {

/// Which black box to query. Text form: "builtin:<weights source>" or
/// "external:<shell command>"; a bare preset name means builtin.
struct ScorerSpec {
  enum class Kind { kBuiltin, kExternal };

  Kind kind = Kind::kBuiltin;
  /// Weights source for builtin, command line for external.
  std::string source = "spotnet";

  static ScorerSpec builtin(std::string weights_source);
  static ScorerSpec external(std::string command);
  /// Throws ConfigError on an empty source or unknown prefix.
  static ScorerSpec parse(std::string_view text);

  std::string to_string() const;

  friend bool operator==(const ScorerSpec&, const ScorerSpec&) = default;
};

/// Batched black-box scoring function f: Image -> [0, 1].
///
/// A Scorer instance is a session: it may hold caches or a child process and
/// must not be used from two threads at once. fork() opens an independent
/// session with identical behavior for another worker.
class Scorer {
 public:
  virtual ~Scorer() = default;

  /// Scores every image, order preserved. All images must share dimensions
  /// (DimensionError otherwise). A non-finite or out-of-range score from the
  /// underlying model is a ContractViolation.
  std::vector<double> score_batch(std::span<const Image> images);

  /// Scores apply_attack(base, v) for every v, without requiring the caller
  /// to materialize the perturbed images.
  std::vector<double> score_perturbations(const Image& base,
                                          std::span<const AttackVector> vectors);

  double score(const Image& image);

  virtual std::string id() const = 0;
  virtual std::unique_ptr<Scorer> fork() const = 0;

 protected:
  virtual void do_score_batch(std::span<const Image> images, std::span<double> out) = 0;
  /// Default implementation materializes the perturbed images.
  virtual void do_score_perturbations(const Image& base,
                                      std::span<const AttackVector> vectors,
                                      std::span<double> out);

 private:
  void check_scores(std::span<const double> scores) const;
};

/// The built-in stride-2 network. Perturbation batches are evaluated
/// incrementally (only the activations inside the perturbed pixel's receptive
/// field are recomputed); results are bit-identical to builtin_forward.
class BuiltinScorer final : public Scorer {
 public:
  BuiltinScorer(NetworkWeights weights, std::string name);
  explicit BuiltinScorer(std::string_view weights_source);
  ~BuiltinScorer() override;

  const NetworkWeights& weights() const noexcept { return *weights_; }
  std::string id() const override;
  std::unique_ptr<Scorer> fork() const override;

 protected:
  void do_score_batch(std::span<const Image> images, std::span<double> out) override;
  void do_score_perturbations(const Image& base, std::span<const AttackVector> vectors,
                              std::span<double> out) override;

 private:
  struct Cache;

  std::shared_ptr<const NetworkWeights> weights_;
  std::string name_;
  std::unique_ptr<Cache> cache_;
};

/// Wraps an arbitrary callable. Mostly useful for tests and analytic
/// objectives; the callable must be pure.
class FunctionScorer final : public Scorer {
 public:
  using Function = std::function<double(const Image&)>;

  FunctionScorer(Function fn, std::string name);

  std::string id() const override { return name_; }
  std::unique_ptr<Scorer> fork() const override;

 protected:
  void do_score_batch(std::span<const Image> images, std::span<double> out) override;

 private:
  Function fn_;
  std::string name_;
};

/// Child process speaking newline-delimited JSON over stdin/stdout:
///   request  {"id":N,"width":W,"height":H,"count":K,"pixels":"<base64 RGB8>"}
///   response {"id":N,"scores":[...K numbers...]}
/// Any mismatch, malformed line, or early exit raises ScorerProtocolError.
class ExternalScorer final : public Scorer {
 public:
  explicit ExternalScorer(std::string command);
  ~ExternalScorer() override;

  ExternalScorer(const ExternalScorer&) = delete;
  ExternalScorer& operator=(const ExternalScorer&) = delete;

  std::string id() const override;
  std::unique_ptr<Scorer> fork() const override;

 protected:
  void do_score_batch(std::span<const Image> images, std::span<double> out) override;

 private:
  struct Session;

  std::string command_;
  std::unique_ptr<Session> session_;
  std::uint64_t next_id_ = 0;
};

std::unique_ptr<Scorer> make_scorer(const ScorerSpec& spec);

/// One-shot convenience: opens a session, scores, closes it.
std::vector<double> score_batch(const ScorerSpec& spec, std::span<const Image> images);

}  // namespace pixelprobe
