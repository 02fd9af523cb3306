#include "commands.hpp"

#include <atomic>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "pixelprobe/analysis.hpp"
#include "pixelprobe/attack.hpp"
#include "pixelprobe/confmap.hpp"
#include "pixelprobe/error.hpp"
#include "pixelprobe/records.hpp"
#include "pixelprobe/render.hpp"
#include "pixelprobe/scorer.hpp"
#include "pixelprobe/synthetic.hpp"

namespace fs = std::filesystem;

namespace pixelprobe::cli {

namespace {

std::string with_commas(std::uint64_t n) {
  std::string digits = std::to_string(n);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return out;
}

// Writes to a sibling temporary file and renames it into place, so readers
// never see a half-written output.
class AtomicFile {
 public:
  explicit AtomicFile(fs::path target) : target_(std::move(target)), tmp_(target_) {
    tmp_ += ".tmp";
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot write " + target_.string());
  }
  ~AtomicFile() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      fs::remove(tmp_, ec);
    }
  }
  std::ostream& stream() { return out_; }
  void commit() {
    out_.close();
    if (!out_) throw IoError("error writing " + target_.string());
    fs::rename(tmp_, target_);
    committed_ = true;
  }

 private:
  fs::path target_;
  fs::path tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

// Runs `write` against the named file, or stdout for "" and "-".
template <typename F>
void emit(const std::string& path, F&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  AtomicFile file(path);
  write(file.stream());
  file.commit();
}

std::vector<AttackRecord> read_all_records(const std::vector<std::string>& paths) {
  std::vector<AttackRecord> all;
  for (const std::string& p : paths) {
    auto part = (p == "-") ? read_records(std::cin, "<stdin>") : read_records(p);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto comma = text.find(',');
  auto parse = [&](std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw ParameterError("--range expects lo,hi, got \"" + text + "\"");
    }
    return v;
  };
  if (comma == std::string::npos) throw ParameterError("--range expects lo,hi, got \"" + text + "\"");
  const std::string_view all(text);
  return {parse(all.substr(0, comma)), parse(all.substr(comma + 1))};
}

}  // namespace

int exit_code_for(ErrorKind kind);

int run_attack_command(const AttackOptions& o) {
  const ScorerSpec spec = ScorerSpec::parse(o.scorer);
  const Direction direction = parse_direction(o.direction);
  const Thresholds thresholds{o.min_threshold, o.max_threshold};
  DEConfig base;
  base.population_size = o.population;
  base.generations = o.generations;
  base.differential_weight = o.differential_weight;
  base.crossover_rate = o.crossover_rate;
  base.early_stop_threshold = o.early_stop;
  base.color_step = o.color_step;
  base.neighborhood_radius = o.radius;
  base.validate();

  const std::size_t n = o.images.size();
  std::vector<std::optional<AttackRecord>> records(n);
  std::vector<std::string> errors(n);
  std::vector<int> codes(n, 0);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    std::unique_ptr<Scorer> scorer;
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        const Image img = load_image(o.images[i]);
        if (!scorer) scorer = make_scorer(spec);
        DEConfig cfg = base;
        cfg.seed = o.seed + i;
        records[i] = run_attack(img, *scorer, direction, cfg, o.images[i]);
      } catch (const Error& e) {
        errors[i] = e.what();
        codes[i] = exit_code_for(e.kind());
        // A broken scorer session is not reused for the next image.
        if (e.kind() == ErrorKind::kScorerProtocol) scorer.reset();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(o.workers, static_cast<unsigned>(n)));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }

  emit(o.output, [&](std::ostream& out) {
    for (const auto& r : records)
      if (r) out << to_json_line(*r) << '\n';
  });
  if (!o.successes.empty()) {
    emit(o.successes, [&](std::ostream& out) {
      for (const auto& r : records)
        if (r && is_success(*r, thresholds)) out << to_json_line(*r) << '\n';
    });
  }
  int code = 0;
  std::size_t wins = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (records[i] && is_success(*records[i], thresholds)) ++wins;
    if (codes[i]) {
      // I/O errors already name the file; scorer errors do not.
      const bool named = errors[i].find(o.images[i]) != std::string::npos;
      std::cerr << "pixelprobe attack: " << (named ? "" : o.images[i] + ": ") << errors[i] << '\n';
      code = std::max(code, codes[i]);
    }
  }
  const auto done = std::count_if(records.begin(), records.end(), [](const auto& r) { return r.has_value(); });
  std::cerr << "attacked " << done << " of " << n << " image(s), " << wins << " successful\n";
  return code;
}

int run_confmap_command(const ConfmapOptions& o) {
  const ColorSet colors(o.color_step);
  const Image image = load_image(o.image);
  const std::uint64_t planned = planned_vector_count(colors, image.width(), image.height());
  std::cout << "planned vectors: " << with_commas(planned) << " (" << image.width() << "x"
            << image.height() << " pixels x " << with_commas(colors.size()) << " colors)\n";
  std::cout.flush();
  if (o.plan_only) return 0;
  if (o.output.empty()) throw ParameterError("confmap needs --output");

  const fs::path ckpt = o.checkpoint.empty() ? fs::path(o.output + ".ckpt") : fs::path(o.checkpoint);
  auto scorer = make_scorer(ScorerSpec::parse(o.scorer));
  const ScanOptions scan{o.batch_size, std::max(1u, o.workers)};

  std::unique_ptr<ConfidenceScanner> scanner;
  if (o.resume) {
    if (!fs::exists(ckpt)) throw IoError("no checkpoint to resume at " + ckpt.string());
    ScanCheckpoint saved = load_checkpoint(ckpt);
    std::cerr << "resuming " << o.image << " at pixel " << saved.completed_pixels << '\n';
    scanner = std::make_unique<ConfidenceScanner>(image, *scorer, colors, std::move(saved), scan);
  } else {
    scanner = std::make_unique<ConfidenceScanner>(image, *scorer, colors, scan);
  }

  std::uint64_t budget = o.halt_after.value_or(scanner->total_pixels());
  const std::uint64_t step = std::max<std::uint64_t>(1, o.checkpoint_every);
  while (!scanner->done() && budget > 0) {
    const std::uint64_t chunk = std::min(step, budget);
    try {
      scanner->advance(chunk);
    } catch (const ScanError& e) {
      save_checkpoint(scanner->checkpoint(), ckpt);
      std::cerr << "pixelprobe confmap: " << e.what() << "; checkpoint saved to " << ckpt.string()
                << " at cursor " << e.cursor() << '\n';
      return exit_code_for(e.kind());
    }
    budget -= chunk;
    save_checkpoint(scanner->checkpoint(), ckpt);
  }
  if (!scanner->done()) {
    std::cerr << "halted at pixel " << scanner->completed_pixels() << " of "
              << scanner->total_pixels() << "; resume with --resume (checkpoint " << ckpt.string()
              << ")\n";
    return 0;
  }

  const ConfidenceMap map = scanner->result();
  const fs::path tmp = o.output + ".tmp";
  save_map(map, tmp);
  fs::rename(tmp, o.output);
  if (!o.csv.empty()) emit(o.csv, [&](std::ostream& out) { write_map_csv(map, out); });
  std::error_code ec;
  fs::remove(ckpt, ec);
  std::cerr << "wrote " << o.output << " (original score " << map.original_score << ")\n";
  return 0;
}

int run_analyze_command(const AnalyzeOptions& o) {
  const Thresholds thresholds{o.min_threshold, o.max_threshold};

  if (o.which == "checkerboard") {
    emit(o.output, [&](std::ostream& out) {
      out << "map,checkerboard_score,high_swing_pixels,high_swing_even_even_fraction\n";
      for (const std::string& p : o.inputs) {
        const ConfidenceMap map = load_map(p);
        const ParityReport rep = high_swing_parity(map, o.swing_fraction);
        char buf[128];
        std::snprintf(buf, sizeof buf, "%.17g,%llu,%.17g", checkerboard_score(map),
                      static_cast<unsigned long long>(rep.total), rep.fraction(Parity::kEvenEven));
        out << p << ',' << buf << '\n';
      }
    });
    return 0;
  }

  std::vector<AttackRecord> records = read_all_records(o.inputs);
  if (o.successes_only) {
    std::erase_if(records, [&](const AttackRecord& r) { return !is_success(r, thresholds); });
  }

  if (o.which == "chromatic") {
    const auto pts = chromatic_scatter(records);
    emit(o.output, [&](std::ostream& out) { write_chromatic_csv(pts, out); });
  } else if (o.which == "spatial") {
    const SpatialStats stats = spatial_stats(records);
    emit(o.output, [&](std::ostream& out) { write_spatial_table(stats, out); });
  } else if (o.which == "parity") {
    const ParityReport rep = parity_analysis(records);
    emit(o.output, [&](std::ostream& out) { write_parity_csv(rep, out); });
  } else if (o.which == "placement") {
    const PlacementGrid grid = placement_heatmap(records, o.width, o.height);
    emit(o.output, [&](std::ostream& out) { write_placement_csv(grid, out); });
  } else {
    throw ParameterError("unknown analysis \"" + o.which + "\"");
  }
  return 0;
}

int run_render_command(const RenderOptionsCli& o) {
  const RenderMode mode = parse_render_mode(o.mode);
  Field field;
  if (mode == RenderMode::kCounts) {
    std::ifstream in(o.input);
    if (!in) throw IoError("cannot open " + o.input);
    field = grid_field(read_placement_csv(in));
  } else {
    field = map_field(load_map(o.input), mode);
  }
  RenderOptions ro;
  ro.scale = o.scale;
  if (!o.range.empty()) ro.range = parse_range(o.range);
  const Image img = render_heatmap(field, ro);
  const fs::path tmp = o.output + ".tmp.png";
  save_image(img, tmp);
  fs::rename(tmp, o.output);
  return 0;
}

int run_scorer_check_command(const ScorerCheckOptions& o) {
  const ScorerSpec spec = ScorerSpec::parse(o.scorer);
  const std::vector<Image> probe{make_uniform_image(8, 8), make_spot_image(8, 8, 2),
                                 make_noise_image(8, 8, 1), make_uniform_image(8, 8, {0, 0, 0})};
  auto scorer = make_scorer(spec);
  const std::vector<double> batch = scorer->score_batch(probe);
  // Same images again, one per request: the scorer must be batch-independent
  // and stateless across requests.
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const double single = scorer->score(probe[i]);
    if (single != batch[i]) {
      throw ContractViolation("probe " + std::to_string(i) + " scored " + std::to_string(batch[i]) +
                              " in a batch but " + std::to_string(single) + " alone");
    }
  }
  if (scorer->score_batch(probe) != batch) throw ContractViolation("repeated batch gave different scores");
  if (!scorer->score_batch({}).empty()) throw ContractViolation("empty batch returned scores");

  std::cout << "probe,score\n";
  const char* names[] = {"uniform", "spot", "noise", "black"};
  for (std::size_t i = 0; i < probe.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", batch[i]);
    std::cout << names[i] << ',' << buf << '\n';
  }
  std::cerr << "scorer " << scorer->id() << " passed the protocol check\n";
  return 0;
}

}  // namespace pixelprobe::cli
