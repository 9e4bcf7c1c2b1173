#pragma once

#include <stdexcept>
#include <string>

namespace rumor {

enum class ErrorKind {
  InvalidArgument,
  SelfLoop,
  DuplicateEdge,
  NotATree,
  Disconnected,
  ExhaustedGraph,
  ConstructionFailed,
  Infeasible,
  EventCapReached,
  UnknownNode,
  Parse,
};

/// Base exception for all library failures. The kind lets the CLI map
/// validation failures to exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace rumor
