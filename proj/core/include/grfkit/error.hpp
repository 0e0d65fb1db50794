#pragma once

#include <stdexcept>

namespace grfkit {

/// Raised for invalid inputs and failed computations throughout the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace grfkit
