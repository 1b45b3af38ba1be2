#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace circleflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the domain of a map (radius range, u-coordinate orthant,
/// spherical per-face constraint, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Three lengths that do not form a triangle in the requested geometry.
class DegenerateTriangle : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, std::vector<std::string> violations)
      : Error(what), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class UnsupportedLayout : public Error {
 public:
  using Error::Error;
};

}  // namespace circleflow
