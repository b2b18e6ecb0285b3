#pragma once

#include <stdexcept>
#include <string>

namespace vvlab {

// Raised when a series or quadrature cannot certify its own accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vorticity requested at t = 0 for data whose vortex sheet has not formed yet.
class InitialLayerError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace vvlab
