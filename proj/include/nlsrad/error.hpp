#pragma once

#include <stdexcept>
#include <string>

namespace nlsrad {

// Failure categories. The CLI maps kConfig/kPrecondition to exit code 1 and
// kNumerical/kInternal to exit code 2.
enum class ErrorKind { kConfig, kPrecondition, kNumerical, kInternal };

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

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace nlsrad
