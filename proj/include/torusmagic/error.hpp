#pragma once

#include <stdexcept>
#include <string>

namespace torusmagic {

// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class dimension_too_small : public error {
 public:
  using error::error;
};

class invalid_start_column : public error {
 public:
  using error::error;
};

// Raised by the explicit constructions when the shape is outside their
// parity/gcd preconditions.
class unsupported_shape : public error {
 public:
  using error::error;
};

class domain_mismatch : public error {
 public:
  using error::error;
};

class plan_shape_mismatch : public error {
 public:
  using error::error;
};

// Document decoding.
class parse_error : public error {
 public:
  using error::error;
};

class shape_error : public error {
 public:
  using error::error;
};

class value_error : public error {
 public:
  using error::error;
};

}  // namespace torusmagic
