#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace equimine {

// Base of every error thrown by the library. `kind()` is a stable
// machine-readable tag used in CLI error reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error("validation", what) {}
};

class RangeError : public Error {
 public:
  explicit RangeError(const std::string& what) : Error("range", what) {}
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::size_t iterations)
      : Error("convergence", what + " after " + std::to_string(iterations) + " iterations"),
        iterations_(iterations) {}

  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double achieved_tolerance)
      : Error("numerical", what + " (achieved error estimate " + std::to_string(achieved_tolerance) + ")"),
        achieved_(achieved_tolerance) {}

  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class DegenerateColumnError : public Error {
 public:
  explicit DegenerateColumnError(std::string indicator)
      : Error("degenerate-column", "indicator column '" + indicator + "' is all zero"),
        indicator_(std::move(indicator)) {}

  const std::string& indicator() const noexcept { return indicator_; }

 private:
  std::string indicator_;
};

class SingularityError : public Error {
 public:
  SingularityError(std::string country, int year)
      : Error("singularity", "leave-one-out mean is zero for country '" + country + "' in year " +
                                 std::to_string(year)),
        country_(std::move(country)),
        year_(year) {}

  const std::string& country() const noexcept { return country_; }
  int year() const noexcept { return year_; }

 private:
  std::string country_;
  int year_;
};

class ZeroVarianceError : public Error {
 public:
  explicit ZeroVarianceError(const std::string& what) : Error("zero-variance", what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error("parse", source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DuplicateKeyError : public Error {
 public:
  explicit DuplicateKeyError(const std::string& what) : Error("duplicate-key", what) {}
};

class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, std::size_t epoch)
      : Error("training", what + " at epoch " + std::to_string(epoch)), epoch_(epoch) {}

  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

}  // namespace equimine
