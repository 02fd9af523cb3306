#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pixelprobe {

/// Broad failure category. The CLI maps these onto process exit codes.
enum class ErrorKind {
  kBounds,
  kParameter,
  kDimension,
  kIo,
  kFormat,
  kConfig,
  kData,
  kEmptyCollection,
  kScorerProtocol,
  kContractViolation,
  kInterrupted,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define PIXELPROBE_DEFINE_ERROR(Name, Kind)                 \
  class Name : public Error {                               \
   public:                                                  \
    explicit Name(const std::string& what) : Error(Kind, what) {} \
  };

PIXELPROBE_DEFINE_ERROR(BoundsError, ErrorKind::kBounds)
PIXELPROBE_DEFINE_ERROR(ParameterError, ErrorKind::kParameter)
PIXELPROBE_DEFINE_ERROR(DimensionError, ErrorKind::kDimension)
PIXELPROBE_DEFINE_ERROR(IoError, ErrorKind::kIo)
PIXELPROBE_DEFINE_ERROR(FormatError, ErrorKind::kFormat)
PIXELPROBE_DEFINE_ERROR(ConfigError, ErrorKind::kConfig)
PIXELPROBE_DEFINE_ERROR(DataError, ErrorKind::kData)
PIXELPROBE_DEFINE_ERROR(EmptyCollectionError, ErrorKind::kEmptyCollection)
PIXELPROBE_DEFINE_ERROR(ScorerProtocolError, ErrorKind::kScorerProtocol)
PIXELPROBE_DEFINE_ERROR(ContractViolation, ErrorKind::kContractViolation)

#undef PIXELPROBE_DEFINE_ERROR

}  // namespace pixelprobe
