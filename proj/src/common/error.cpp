#include "fullersim/error.hpp"

namespace fullersim {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kUnsupportedSize: return "unsupported-size";
    case ErrorKind::kNonConvergence: return "non-convergence";
    case ErrorKind::kConsistency: return "consistency";
    case ErrorKind::kStaleCache: return "stale-cache";
    case ErrorKind::kCorruption: return "corruption";
    case ErrorKind::kRange: return "range";
    case ErrorKind::kDegenerate: return "degenerate";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kRange:
    case ErrorKind::kIo:
      return 2;
    case ErrorKind::kUnsupportedSize:
      return 3;
    case ErrorKind::kNonConvergence:
    case ErrorKind::kDegenerate:
      return 4;
    case ErrorKind::kConsistency:
    case ErrorKind::kStaleCache:
    case ErrorKind::kCorruption:
      return 5;
  }
  return 1;
}

}  // namespace fullersim
