// SPDX-License-Identifier: Apache-2.0

#ifndef CCMAVF_ERRORS_HPP
#define CCMAVF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ccmavf {

// Input outside the operation's domain (bad DOA, zero weight vector, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when g^H R g vanishes and the line search has no unique minimizer.
class SingularDenominatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A covariance-type matrix could not be factorized.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ccmavf

#endif  // CCMAVF_ERRORS_HPP
