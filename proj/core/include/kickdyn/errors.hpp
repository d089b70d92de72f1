#pragma once

#include <stdexcept>
#include <string>

namespace kickdyn {

// Argument outside the mathematical domain of a function (|x| > 1 for a
// Chebyshev map, a singular density point, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Structurally invalid argument (M >= N for a preimage sum, N < 2, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A running simulation produced a non-finite state.
class SimulationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kickdyn
