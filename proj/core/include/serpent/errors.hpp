#pragma once

#include <stdexcept>
#include <string>

namespace serpent {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed document. Carries the offending field path when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Well-formed input that breaks a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Balance matrix singular or too ill-conditioned to invert.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double time = 0.0) : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

class GraphError : public Error {
 public:
  using Error::Error;
};

}  // namespace serpent
