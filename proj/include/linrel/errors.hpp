#pragma once

#include <stdexcept>
#include <string>

namespace linrel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands with incompatible ambient or block dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A vector outside the domain of a relation.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  [[nodiscard]] double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A standing hypothesis (domain or multivalued-part containment) is violated.
class HypothesisError : public Error {
 public:
  HypothesisError(const std::string& what, std::string which, double gap)
      : Error(what), which_(std::move(which)), gap_(gap) {}
  [[nodiscard]] const std::string& which() const noexcept { return which_; }
  [[nodiscard]] double gap() const noexcept { return gap_; }

 private:
  std::string which_;
  double gap_;
};

/// Instance parameters that violate dimension arithmetic.
class InfeasibleSpec : public Error {
 public:
  using Error::Error;
};

/// Malformed input documents.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace linrel
