#include <string>

#include <json.hpp>

#include "child_process.hpp"
#include "pixelprobe/codec.hpp"
#include "pixelprobe/error.hpp"
#include "pixelprobe/scorer.hpp"

namespace pixelprobe {

struct ExternalScorer::Session {
  detail::ChildProcess process;
  explicit Session(const std::string& command) : process(command) {}
};

ExternalScorer::ExternalScorer(std::string command)
    : command_(std::move(command)), session_(std::make_unique<Session>(command_)) {}

ExternalScorer::~ExternalScorer() = default;

std::string ExternalScorer::id() const { return "external:" + command_; }

std::unique_ptr<Scorer> ExternalScorer::fork() const {
  return std::make_unique<ExternalScorer>(command_);
}

void ExternalScorer::do_score_batch(std::span<const Image> images, std::span<double> out) {
  using nlohmann::json;
  const Image& first = images.front();
  std::vector<std::uint8_t> bytes;
  bytes.reserve(images.size() * first.pixel_count() * 3);
  for (const Image& img : images) {
    for (const Rgb& p : img.pixels()) {
      bytes.push_back(p.r);
      bytes.push_back(p.g);
      bytes.push_back(p.b);
    }
  }
  const std::uint64_t id = next_id_++;
  const json request = {
      {"id", id},
      {"width", first.width()},
      {"height", first.height()},
      {"count", images.size()},
      {"pixels", base64_encode(bytes)},
  };
  session_->process.write_all(request.dump() + "\n");

  const std::string line = session_->process.read_line();
  json reply;
  try {
    reply = json::parse(line);
  } catch (const json::exception&) {
    throw ScorerProtocolError("scorer reply is not JSON: \"" + line.substr(0, 80) + "\"");
  }
  if (!reply.is_object() || !reply.contains("id") || !reply["id"].is_number_unsigned()) {
    throw ScorerProtocolError("scorer reply lacks an unsigned \"id\"");
  }
  if (reply["id"].get<std::uint64_t>() != id) {
    throw ScorerProtocolError("scorer reply id " + reply["id"].dump() + " does not match request " +
                              std::to_string(id));
  }
  const auto scores = reply.find("scores");
  if (scores == reply.end() || !scores->is_array()) {
    throw ScorerProtocolError("scorer reply lacks a \"scores\" array");
  }
  if (scores->size() != images.size()) {
    throw ScorerProtocolError("scorer returned " + std::to_string(scores->size()) +
                              " scores for " + std::to_string(images.size()) + " images");
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    const json& s = (*scores)[i];
    if (!s.is_number()) throw ScorerProtocolError("non-numeric score at index " + std::to_string(i));
    out[i] = s.get<double>();
  }
}

}  // namespace pixelprobe
