#pragma once

#include <stdexcept>
#include <string>

namespace g1s {

// Every library failure carries a machine-readable code (e.g. "SmoothnessViolation")
// so that the CLI can report it as JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace g1s
