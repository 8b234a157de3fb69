#pragma once

#include <stdexcept>
#include <string>

namespace qdomino {

/// Invalid input: a malformed config, an out-of-range index, a model
/// applied to the wrong geometry. The CLI maps these to exit code 2.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure at run time (non-Hermitian Hamiltonian, norm drift).
/// The CLI maps these to exit code 3.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Failure writing or reading an output destination.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace qdomino
