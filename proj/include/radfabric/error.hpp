#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace radfabric {

enum class ErrorKind {
  kInvalidInput,
  kNotFound,
  kProtocolViolation,
  kFormat,
  kConnection,
  kTimeout,
  kRemoteFailure,
  kIo,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kNotFound: return "not-found";
    case ErrorKind::kProtocolViolation: return "protocol-violation";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kConnection: return "connection";
    case ErrorKind::kTimeout: return "timeout";
    case ErrorKind::kRemoteFailure: return "remote-failure";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

// True for failures that originate on the far side of a transport.
constexpr bool is_remote(ErrorKind kind) {
  return kind == ErrorKind::kConnection || kind == ErrorKind::kTimeout ||
         kind == ErrorKind::kRemoteFailure ||
         kind == ErrorKind::kProtocolViolation;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

[[noreturn]] inline void invalid_input(const std::string& message) {
  throw Error(ErrorKind::kInvalidInput, message);
}

}  // namespace radfabric
