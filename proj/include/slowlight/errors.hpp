#pragma once

#include <stdexcept>
#include <string>

namespace slowlight {

// Exit-code mapping in the CLI: ValidationError -> 1, NumericalError -> 2,
// IoError -> 3.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace slowlight
