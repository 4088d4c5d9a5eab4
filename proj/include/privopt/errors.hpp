#pragma once

#include <stdexcept>
#include <string>

namespace privopt {

// Thrown when the floor system {x : Ax <= b*} is empty, i.e. the
// always-feasible release contract cannot be honored.
class InfeasibleFloorSystem : public std::runtime_error {
 public:
  explicit InfeasibleFloorSystem(const std::string& what)
      : std::runtime_error(what) {}
};

// Thrown when the intersection of feasible sets across databases is
// empty and therefore no (eps, 0)-DP mechanism exists.
class NoPureDpMechanism : public std::runtime_error {
 public:
  explicit NoPureDpMechanism(const std::string& what)
      : std::runtime_error(what) {}
};

// Propagated when an embedded solve does not reach Optimal where the
// caller requires it.
class SolverFailure : public std::runtime_error {
 public:
  explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

class NotStronglyStable : public std::runtime_error {
 public:
  explicit NotStronglyStable(const std::string& what)
      : std::runtime_error(what) {}
};

class SingularMatrix : public std::runtime_error {
 public:
  explicit SingularMatrix(const std::string& what)
      : std::runtime_error(what) {}
};

class DimensionTooLarge : public std::runtime_error {
 public:
  explicit DimensionTooLarge(const std::string& what)
      : std::runtime_error(what) {}
};

class InfeasibleInstance : public std::runtime_error {
 public:
  explicit InfeasibleInstance(const std::string& what)
      : std::runtime_error(what) {}
};

// Input file / text parsing error with location context.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int row = -1, int column = -1)
      : std::runtime_error(what), row_(row), column_(column) {}
  int row() const { return row_; }
  int column() const { return column_; }

 private:
  int row_;
  int column_;
};

class DimensionError : public std::runtime_error {
 public:
  explicit DimensionError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace privopt
