#pragma once

#include <stdexcept>
#include <string>

namespace fdalg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimensions or block layouts of two operands do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An argument violates an operation's precondition (non-unital input, foreign parent, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A rank decision or algebra-closure check could not be trusted.
class NumericalInstability : public Error {
 public:
  NumericalInstability(const std::string& what, double defect)
      : Error(what), defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

/// The staged builder ran out of tries before finding an irreducible perturbation.
class SearchExhausted : public Error {
 public:
  SearchExhausted(const std::string& what, int stage, int dim, int best_dim, int tries)
      : Error(what), stage_(stage), dim_(dim), best_dim_(best_dim), tries_(tries) {}
  int stage() const noexcept { return stage_; }
  int dim() const noexcept { return dim_; }
  /// Smallest joint-commutant dimension observed during the search.
  int best_dim() const noexcept { return best_dim_; }
  int tries() const noexcept { return tries_; }

 private:
  int stage_;
  int dim_;
  int best_dim_;
  int tries_;
};

}  // namespace fdalg
