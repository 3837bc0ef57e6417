#pragma once

#include <stdexcept>
#include <string>

namespace scramblon {

// Root of every exception thrown by the library. The C API maps each
// subclass onto one scr_status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A complex power or kernel was asked to evaluate off the principal branch.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class RateMismatch : public Error {
 public:
  using Error::Error;
};

// A finite-N code path received the N = infinity sentinel.
class InfiniteSizeError : public Error {
 public:
  using Error::Error;
};

class RepresentationError : public Error {
 public:
  using Error::Error;
};

class NonPhysicalState : public Error {
 public:
  NonPhysicalState(const std::string& what, double eigenvalue)
      : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace scramblon
