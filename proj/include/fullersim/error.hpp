#pragma once

#include <stdexcept>
#include <string>

namespace fullersim {

// Failure taxonomy shared by every module. The CLI maps each kind onto a
// distinct process exit code.
enum class ErrorKind {
  kConfig,           // bad user input: flags, config keys, malformed files
  kUnsupportedSize,  // problem too large for the requested method
  kNonConvergence,   // iterative method failed to reach tolerance
  kConsistency,      // internal invariant broken (incomplete manifold, ...)
  kStaleCache,       // cache written for a different graph
  kCorruption,       // cache content fails verification
  kRange,            // argument outside its documented domain
  kDegenerate,       // ambiguous answer (tied eigenvalues, ambiguous match)
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

// Exit code used by the command-line tool for a given failure kind.
int exit_code(ErrorKind kind) noexcept;

}  // namespace fullersim
