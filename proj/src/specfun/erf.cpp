#include <cmath>
#include <stdexcept>

#include "vvlab/specfun.hpp"

namespace vvlab::specfun {

// The C library's erf/erfc are correctly rounded to a few ulp.
double erf(double x) {
  if (!std::isfinite(x)) throw std::domain_error("erf: non-finite argument");
  return std::erf(x);
}

double erfc(double x) {
  if (!std::isfinite(x)) throw std::domain_error("erfc: non-finite argument");
  return std::erfc(x);
}

}  // namespace vvlab::specfun
