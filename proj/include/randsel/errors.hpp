#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace randsel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DetectabilityError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Fixed-point iteration stopped before reaching its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

// No admissible parameters exist. Carries the quantity that would fix it:
// the smallest workable sample size, or the candidate that cannot be
// dominated.
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what,
                           std::optional<int> minimum_sample_size = {},
                           std::optional<int> candidate = {})
      : Error(what),
        minimum_sample_size_(minimum_sample_size),
        candidate_(candidate) {}
  std::optional<int> minimum_sample_size() const {
    return minimum_sample_size_;
  }
  // 1-based candidate index.
  std::optional<int> candidate() const { return candidate_; }

 private:
  std::optional<int> minimum_sample_size_;
  std::optional<int> candidate_;
};

class OptimizationError : public Error {
 public:
  OptimizationError(const std::string& what, std::string status)
      : Error(what + " (solver status: " + status + ")"),
        status_(std::move(status)) {}
  const std::string& status() const { return status_; }

 private:
  std::string status_;
};

class RejectionBudgetError : public Error {
 public:
  RejectionBudgetError(const std::string& what, double alpha, long attempts)
      : Error(what), alpha_(alpha), attempts_(attempts) {}
  double alpha() const { return alpha_; }
  double expected_draws_bound() const { return 1.0 / alpha_; }
  long attempts() const { return attempts_; }

 private:
  double alpha_;
  long attempts_;
};

}  // namespace randsel
