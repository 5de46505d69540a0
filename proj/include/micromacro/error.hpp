#pragma once

#include <stdexcept>
#include <string>

namespace micromacro {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid physical or numerical parameter (eta outside [0,1], negative gain, k < 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// The requested photon-number cutoff leaves more probability mass outside the
// truncated space than the configured tail tolerance allows.
class CutoffError : public Error {
 public:
  CutoffError(const std::string& what, double tail_mass, int n_max)
      : Error(what), tail_mass_(tail_mass), n_max_(n_max) {}

  double tail_mass() const noexcept { return tail_mass_; }
  int n_max() const noexcept { return n_max_; }

 private:
  double tail_mass_;
  int n_max_;
};

// A density matrix with eigenvalues below -tol, or a state with zero weight
// in a sector it is being conditioned on.
class NonPhysicalState : public Error {
 public:
  using Error::Error;
};

// P(+1) + P(-1) == 0: every event was inconclusive.
class UndefinedVisibility : public Error {
 public:
  using Error::Error;
};

}  // namespace micromacro
