#pragma once

#include <stdexcept>
#include <string>

namespace rigdepth {

// Missing or malformed inputs (files, dimensions, schema).  The CLI maps
// these to exit code 2.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failures (non-finite losses or gradients).  Exit code 3.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rigdepth
