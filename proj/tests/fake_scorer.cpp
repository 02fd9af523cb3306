// Stand-in external scorer. Scores each image by its mean red channel / 255.
// The first argument selects a misbehavior for protocol tests:
//   ok, bad-id, short, garbage, die, out-of-range, once

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pixelprobe/codec.hpp"

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "ok";
  std::string line;
  int served = 0;
  while (std::getline(std::cin, line)) {
    if (mode == "die") return 7;
    const auto req = nlohmann::json::parse(line);
    const auto w = req.at("width").get<std::uint64_t>();
    const auto h = req.at("height").get<std::uint64_t>();
    const auto count = req.at("count").get<std::uint64_t>();
    const std::vector<std::uint8_t> px =
        pixelprobe::base64_decode(req.at("pixels").get<std::string>());
    if (px.size() != w * h * 3 * count) return 9;

    nlohmann::json scores = nlohmann::json::array();
    for (std::uint64_t k = 0; k < count; ++k) {
      double sum = 0.0;
      for (std::uint64_t i = 0; i < w * h; ++i) sum += px[(k * w * h + i) * 3];
      scores.push_back(sum / static_cast<double>(w * h) / 255.0);
    }
    if (mode == "short" && !scores.empty()) scores.erase(scores.size() - 1);
    if (mode == "out-of-range") scores[0] = 1.5;

    if (mode == "garbage") {
      std::cout << "this is not json" << std::endl;
      continue;
    }
    nlohmann::json reply{{"id", req.at("id").get<std::uint64_t>() + (mode == "bad-id" ? 1 : 0)},
                         {"scores", scores}};
    std::cout << reply.dump() << std::endl;
    if (mode == "once" && ++served == 1) return 0;
  }
  return 0;
}
