#pragma once

#include <stdexcept>
#include <string>

namespace phcert {

/// Input that no operation can make sense of (non-positive radius, bad file).
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation of a profile outside the radial interval it is defined on.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A construction step declines to run because one of its hypotheses fails.
/// `relation()` names the hypothesis so reports can say which one.
class RefusalError : public std::runtime_error {
 public:
  RefusalError(std::string relation, const std::string& what)
      : std::runtime_error(what), relation_(std::move(relation)) {}
  const std::string& relation() const noexcept { return relation_; }

 private:
  std::string relation_;
};

/// Gluing data whose radii do not line up with the exterior profile.
class AlignmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One-sided stencil would leave its piece; carries the largest admissible step.
class StencilError : public std::runtime_error {
 public:
  StencilError(const std::string& what, double max_step)
      : std::runtime_error(what), max_step_(max_step) {}
  double max_step() const noexcept { return max_step_; }

 private:
  double max_step_;
};

/// Spec file that violates the schema; `field()` is a JSON-pointer-like path.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Well-formed file whose numbers are unusable (non-monotone radii, too few rows).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace phcert
