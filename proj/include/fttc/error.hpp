#pragma once

#include <stdexcept>
#include <string>

namespace fttc {

enum class ErrorKind {
  invalid_argument,
  config,
  divergence,
  io,
  numerical,
};

/// Base exception for the library. The kind maps one-to-one onto the C API
/// status codes and the CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_invalid(const std::string& what) {
  throw Error(ErrorKind::invalid_argument, what);
}

[[noreturn]] inline void throw_config(const std::string& what) {
  throw Error(ErrorKind::config, what);
}

[[noreturn]] inline void throw_io(const std::string& what) {
  throw Error(ErrorKind::io, what);
}

[[noreturn]] inline void throw_numerical(const std::string& what) {
  throw Error(ErrorKind::numerical, what);
}

}  // namespace fttc
