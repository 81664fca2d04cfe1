#pragma once

#include <stdexcept>
#include <string>

namespace cpphase {

// Exit codes used by the command line front-end. Each error class maps to one.
enum class ExitCode : int {
  ok = 0,
  failure = 1,
  validation = 2,
  insufficient_data = 3,
  budget_exhausted = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::failure; }
};

// Invalid model specification or simulation parameters.
class SpecError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::validation; }
};

// Argument outside the domain of an operation (vertex outside window, ...).
class DomainError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::validation; }
};

// Edges-above query too close to the window boundary.
class MarginError : public DomainError {
 public:
  using DomainError::DomainError;
};

class GenerationError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::validation; }
};

class InsufficientData : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::insufficient_data; }
};

// Fewer than two cut points: either the e = infinity regime or a window that
// is too small.
class DecompositionUnavailable : public InsufficientData {
 public:
  using InsufficientData::InsufficientData;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, double required)
      : Error(what), required_(required) {}
  ExitCode exit_code() const noexcept override { return ExitCode::budget_exhausted; }
  double required() const noexcept { return required_; }

 private:
  double required_;
};

class BracketError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::validation; }
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cpphase
