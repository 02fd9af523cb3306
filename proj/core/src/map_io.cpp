#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <ostream>
#include <string>

#include "pixelprobe/confmap.hpp"
#include "pixelprobe/error.hpp"

namespace pixelprobe {

namespace {

constexpr char kMapMagic[4] = {'O', 'P', 'C', 'M'};
constexpr char kCheckpointMagic[4] = {'O', 'P', 'C', 'K'};
constexpr std::uint16_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 2 + 2 + 4 + 4 + 8 + 4;

class Writer {
 public:
  explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}

  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  template <typename T>
  void le(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v)); }

 private:
  std::vector<std::uint8_t>& out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::size_t remaining() const { return in_.size() - pos_; }
  std::size_t position() const { return pos_; }

  template <typename T>
  T le() {
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(T{in_[pos_ + i]} << (8 * i));
    pos_ += sizeof(T);
    return v;
  }
  double f64() { return std::bit_cast<double>(le<std::uint64_t>()); }
  std::span<const std::uint8_t> take(std::size_t n) {
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError(path.string() + ": write failed");
}

void encode_into(const ConfidenceMap& map, std::vector<std::uint8_t>& out) {
  const std::size_t cells = std::size_t{map.width} * map.height;
  if (map.min_map.size() != cells || map.max_map.size() != cells || map.avg_map.size() != cells) {
    throw DimensionError("map arrays do not match the declared size");
  }
  if (map.color_step < 1 || map.color_step > 0xffff) throw ParameterError("color step out of range");
  Writer w(out);
  w.bytes(kMapMagic, 4);
  w.le<std::uint16_t>(kVersion);
  w.le<std::uint16_t>(static_cast<std::uint16_t>(map.color_step));
  w.le<std::uint32_t>(map.width);
  w.le<std::uint32_t>(map.height);
  w.f64(map.original_score);
  w.le<std::uint32_t>(static_cast<std::uint32_t>(map.scorer_id.size()));
  w.bytes(map.scorer_id.data(), map.scorer_id.size());
  for (const auto* arr : {&map.min_map, &map.max_map, &map.avg_map})
    for (double v : *arr) w.f64(v);
}

ConfidenceMap decode_from(Reader& r, std::size_t total_size, bool exact) {
  auto truncated = [&](std::size_t expected) {
    return FormatError("truncated map: expected " + std::to_string(expected) + " bytes, got " +
                       std::to_string(total_size));
  };
  const std::size_t start = r.position();
  if (r.remaining() < 4) throw truncated(start + kHeaderBytes);
  const auto magic = r.take(4);
  if (std::memcmp(magic.data(), kMapMagic, 4) != 0) throw FormatError("bad magic: not an OPCM map");
  if (r.remaining() < kHeaderBytes - 4) throw truncated(start + kHeaderBytes);
  const auto version = r.le<std::uint16_t>();
  if (version != kVersion) {
    throw FormatError("unsupported map version " + std::to_string(version) + " (expected " +
                      std::to_string(kVersion) + ")");
  }
  ConfidenceMap m;
  m.color_step = r.le<std::uint16_t>();
  m.width = r.le<std::uint32_t>();
  m.height = r.le<std::uint32_t>();
  m.original_score = r.f64();
  const auto id_len = r.le<std::uint32_t>();

  const std::uint64_t cells = std::uint64_t{m.width} * m.height;
  const std::uint64_t body = std::uint64_t{id_len} + cells * 24;
  const std::uint64_t expected = start + kHeaderBytes + body;
  if (cells > (std::uint64_t{1} << 40) || r.remaining() < body) throw truncated(expected);
  if (exact && r.remaining() != body) {
    throw FormatError("map has " + std::to_string(r.remaining() - body) + " trailing bytes");
  }
  const auto id = r.take(id_len);
  m.scorer_id.assign(id.begin(), id.end());
  for (auto* arr : {&m.min_map, &m.max_map, &m.avg_map}) {
    arr->resize(cells);
    for (double& v : *arr) v = r.f64();
  }
  return m;
}

void append_double(std::string& s, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  s.append(buf, res.ptr);
}

}  // namespace

std::vector<std::uint8_t> encode_map(const ConfidenceMap& map) {
  std::vector<std::uint8_t> out;
  encode_into(map, out);
  return out;
}

ConfidenceMap decode_map(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  return decode_from(r, bytes.size(), true);
}

void save_map(const ConfidenceMap& map, const std::filesystem::path& path) {
  write_file(path, encode_map(map));
}

ConfidenceMap load_map(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_map(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_checkpoint(const ScanCheckpoint& checkpoint, const std::filesystem::path& path) {
  std::vector<std::uint8_t> out;
  Writer w(out);
  w.bytes(kCheckpointMagic, 4);
  w.le<std::uint16_t>(kVersion);
  encode_into(checkpoint.partial, out);
  w.le<std::uint64_t>(checkpoint.completed_pixels);

  auto tmp = path;
  tmp += ".tmp";
  write_file(tmp, out);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError(path.string() + ": cannot replace checkpoint: " + ec.message());
}

ScanCheckpoint load_checkpoint(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    Reader r(bytes);
    if (bytes.size() < 6) throw FormatError("truncated checkpoint");
    const auto magic = r.take(4);
    if (std::memcmp(magic.data(), kCheckpointMagic, 4) != 0) {
      throw FormatError("bad magic: not an OPCK checkpoint");
    }
    const auto version = r.le<std::uint16_t>();
    if (version != kVersion) throw FormatError("unsupported checkpoint version " + std::to_string(version));
    ScanCheckpoint cp;
    cp.partial = decode_from(r, bytes.size(), false);
    if (r.remaining() != 8) throw FormatError("checkpoint trailer must be 8 bytes");
    cp.completed_pixels = r.le<std::uint64_t>();
    return cp;
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_map_csv(const ConfidenceMap& map, std::ostream& out) {
  std::string line;
  out << "x,y,min,max,avg\n";
  for (std::uint32_t y = 0; y < map.height; ++y) {
    for (std::uint32_t x = 0; x < map.width; ++x) {
      const std::size_t i = map.index(x, y);
      line = std::to_string(x) + ',' + std::to_string(y) + ',';
      append_double(line, map.min_map[i]);
      line += ',';
      append_double(line, map.max_map[i]);
      line += ',';
      append_double(line, map.avg_map[i]);
      line += '\n';
      out << line;
    }
  }
}

}  // namespace pixelprobe
