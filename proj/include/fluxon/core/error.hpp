#pragma once

#include <stdexcept>
#include <string>

namespace fluxon {

/// Base for all errors raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: malformed files, invalid arguments, violated preconditions.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace fluxon
