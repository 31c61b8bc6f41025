#pragma once

#include <stdexcept>
#include <string>

namespace sobolev {

/// Input does not satisfy an operation's preconditions (shape, range, ...).
class ContractError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// The space lacks a structure the operation needs (lattice order, ...).
class CapabilityError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// A theorem hypothesis fails for the given space, e.g. order continuity.
class HypothesisError : public CapabilityError {
public:
  using CapabilityError::CapabilityError;
};

/// A claimed Lipschitz constant was violated on sampled data.
class LipschitzViolation : public std::runtime_error {
public:
  LipschitzViolation(const std::string& what, std::size_t first, std::size_t second)
      : std::runtime_error(what), first_node(first), second_node(second) {}
  std::size_t first_node;
  std::size_t second_node;
};

/// A family handed to a compactness probe exceeds its declared bounds.
class CertificationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace sobolev
