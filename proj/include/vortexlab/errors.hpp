#pragma once

#include <stdexcept>
#include <string>

namespace vortexlab {

/// Stable error categories. They map 1:1 onto the C ABI status codes and the
/// CLI exit codes (0 ok, 2 validation, 3 numerical, 4 io).
enum class ErrorCode : int {
  ok = 0,
  validation = 2,
  numerical = 3,
  io = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Bad arguments, malformed configs, mismatched grids/meshes.
struct ValidationError : Error {
  explicit ValidationError(const std::string& what)
      : Error(ErrorCode::validation, what) {}
};

/// CFL violations, non-finite state, diverged solves.
struct NumericalError : Error {
  explicit NumericalError(const std::string& what)
      : Error(ErrorCode::numerical, what) {}
};

/// Filesystem and format failures.
struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

}  // namespace vortexlab
