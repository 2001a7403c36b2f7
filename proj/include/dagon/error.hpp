#pragma once

#include <stdexcept>
#include <string>

namespace dagon {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller-fixable problems: missing files, bad formats, invalid configuration.
class UserError : public Error {
 public:
  using Error::Error;
};

class IoError : public UserError {
 public:
  using UserError::UserError;
};

class FormatError : public UserError {
 public:
  using UserError::UserError;
};

class ConfigError : public UserError {
 public:
  using UserError::UserError;
};

// Every seed in the list has already been consumed.
class SeedsExhaustedError : public UserError {
 public:
  using UserError::UserError;
};

// Unused seeds remain but none of them occurs in the corpus.
class SeedsAbsentError : public UserError {
 public:
  using UserError::UserError;
};

}  // namespace dagon
