#pragma once

#include <stdexcept>
#include <string>

namespace heatex {

//! Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//! Malformed input object (non-Hermitian matrix, dimension mismatch, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

//! A numerical function was asked to leave its domain (log of 0, etc.).
class DomainError : public Error {
 public:
  using Error::Error;
};

//! Invalid experiment configuration; surfaces as exit code 2 in the CLI.
class ConfigError : public Error {
 public:
  using Error::Error;
};

//! Trajectory integration produced a non-finite state or broke its budget.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

//! Reading a config or writing outputs failed; exit code 2 in the CLI.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace heatex
