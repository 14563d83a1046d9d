#pragma once

#include <stdexcept>
#include <string>

namespace kva {

// Base for every error raised by the library. what() is prefixed with the
// originating module, e.g. "[regcap] negative EAD".
class Error : public std::runtime_error {
 public:
  Error(const std::string& module, const std::string& message)
      : std::runtime_error("[" + module + "] " + message), module_(module) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

// Precondition violation or malformed input (bad grid, bad file, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure failed (root bracketing, fixed-point iteration).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace kva
