#include "pixelprobe/error.hpp"

namespace pixelprobe {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kBounds: return "bounds error";
    case ErrorKind::kParameter: return "parameter error";
    case ErrorKind::kDimension: return "dimension error";
    case ErrorKind::kIo: return "I/O error";
    case ErrorKind::kFormat: return "format error";
    case ErrorKind::kConfig: return "configuration error";
    case ErrorKind::kData: return "data error";
    case ErrorKind::kEmptyCollection: return "empty-collection error";
    case ErrorKind::kScorerProtocol: return "scorer-protocol error";
    case ErrorKind::kContractViolation: return "contract violation";
    case ErrorKind::kInterrupted: return "interrupted";
  }
  return "error";
}

}  // namespace pixelprobe
