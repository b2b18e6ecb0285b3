#include <cmath>
#include <stdexcept>
#include <string>

#include "vvlab/layer_spec.hpp"
#include "vvlab/specfun.hpp"

namespace vvlab {

void LayerSpec::validate(double inradius) const {
  if (!(delta_star > 0.0)) throw std::invalid_argument("layer: delta_star must be positive");
  if (!(delta_star < delta))
    throw std::invalid_argument("layer: delta_star must be smaller than delta");
  if (!(delta < inradius))
    throw std::invalid_argument("layer: delta must be smaller than the inradius " +
                                std::to_string(inradius));
  if (!(kato_constant > 0.0)) throw std::invalid_argument("layer: kato_constant must be positive");
}

namespace specfun {
namespace {

double gap_fraction(const LayerSpec& layer, double d) {
  if (!(layer.delta_star < layer.delta) || !(layer.delta_star > 0.0))
    throw std::invalid_argument("smooth_cutoff: need 0 < delta_star < delta");
  if (!std::isfinite(d) || d < 0.0)
    throw std::invalid_argument("smooth_cutoff: distance must be finite and >= 0");
  return (d - layer.delta_star) / (layer.delta - layer.delta_star);
}

}  // namespace

double smooth_cutoff(const LayerSpec& layer, double distance_to_boundary) {
  const double s = gap_fraction(layer, distance_to_boundary);
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  return 1.0 - s * s * (3.0 - 2.0 * s);
}

double smooth_cutoff_derivative(const LayerSpec& layer, double distance_to_boundary) {
  const double s = gap_fraction(layer, distance_to_boundary);
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return -6.0 * s * (1.0 - s) / (layer.delta - layer.delta_star);
}

}  // namespace specfun
}  // namespace vvlab
