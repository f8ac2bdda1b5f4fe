#pragma once

#include <stdexcept>
#include <string>

namespace ncfree {

/// Root of the library's exception hierarchy. The CLI maps the three
/// intermediate categories below onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates an operation's precondition (CLI exit code 2).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed or was inconclusive (CLI exit code 1).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed expression text (CLI exit code 3).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class MixedChartError : public ParseError {
 public:
  using ParseError::ParseError;
};

class DimensionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class AssignmentError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class SpectrumOutsideDomain : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ClusteringError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class Unsupported : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NotSymmetric : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Carries the text of the sub-expression whose inverse failed.
class SingularityError : public NumericalError {
 public:
  SingularityError(const std::string& what, std::string subexpression)
      : NumericalError(what + ": " + subexpression), subexpression_(std::move(subexpression)) {}
  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

class InconclusiveError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class GenerationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IllConditionedInterpolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ContradictionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EvaluatorError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace ncfree
