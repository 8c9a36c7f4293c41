#pragma once

#include <stdexcept>
#include <string>

namespace focal {

/// Base class for all domain failures raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent trace content. Messages carry line numbers.
class TraceError : public Error {
 public:
  using Error::Error;
};

/// Transport or protocol failure while talking to a model backend.
class BackendError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration: unknown keys, unreadable files, invalid values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace focal
