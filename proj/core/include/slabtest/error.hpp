#pragma once

#include <stdexcept>
#include <string>

namespace slabtest {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Threshold inversion requested outside the range of the forward map.
/// Carries the largest admissible argument.
class ThresholdRangeError : public DomainError {
 public:
  ThresholdRangeError(const std::string& what, double upper_bound)
      : DomainError(what), upper_bound_(upper_bound) {}

  double upper_bound() const noexcept { return upper_bound_; }

 private:
  double upper_bound_;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, std::string path)
      : std::runtime_error(what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace slabtest
