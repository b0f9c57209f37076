#pragma once

#include <stdexcept>
#include <string>

namespace nfmkdv {

// Bad input: malformed configuration, out-of-range parameter, shape
// mismatch. The CLI maps it to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// NaN/Inf in a state, failed Picard convergence, degenerate fits.
// The CLI maps it to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nfmkdv
