#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "vvlab/errors.hpp"
#include "vvlab/shear_flow.hpp"

namespace vvlab::shear {
namespace {

const double kSqrtPi = std::sqrt(std::numbers::pi);
// Kernel support in units of sqrt(4 nu t): 20 of them is 40 sqrt(nu t),
// where the Gaussian is below 1e-170.
constexpr double kKernelWidth = 20.0;

const specfun::QuadratureRule& panel_rule() {
  static const specfun::QuadratureRule rule = specfun::gauss_legendre(12, 0.0, 1.0);
  return rule;
}

void check_positive_time(double t, const char* what) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument(std::string(what) + ": t must be positive");
}

}  // namespace

ShearSolution::ShearSolution(ShearProfile profile, double nu, double half_width)
    : profile_(std::move(profile)), nu_(nu), half_width_(half_width) {
  if (!(nu_ > 0.0) || !std::isfinite(nu_)) throw std::invalid_argument("shear solution: nu must be positive");
  if (!(half_width_ > 0.0) || !std::isfinite(half_width_))
    throw std::invalid_argument("shear solution: half width L must be positive");
}

// In the variable w = (y - z)/sigma with sigma = sqrt(4 nu t), the image
// kernel becomes exp(-w^2) - exp(-(w + 2b)^2), b = z / sigma, supported on
// w > -b. The derivative kernel is w exp(-w^2) + (w + 2b) exp(-(w + 2b)^2).
double ShearSolution::kernel_integral(double t, double z, bool derivative) const {
  const double sigma = std::sqrt(4.0 * nu_ * t);
  const double b = z / sigma;
  const double lo = std::max(-b, -kKernelWidth), hi = kKernelWidth;
  // Panels resolve both the Gaussian and the profile's own features.
  double width = 0.5;
  if (std::isfinite(profile_.feature_length())) width = std::min(width, 0.5 * profile_.feature_length() / sigma);
  std::vector<double> edges;
  const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / width));
  edges.reserve(panels + profile_.breakpoints().size() + 1);
  for (std::size_t p = 0; p <= panels; ++p) edges.push_back(p == panels ? hi : lo + (hi - lo) * p / panels);
  for (double knot : profile_.breakpoints()) {
    const double w = (knot - z) / sigma;
    if (w > lo && w < hi) edges.push_back(w);
  }
  std::sort(edges.begin(), edges.end());

  const auto& rule = panel_rule();
  double sum = 0.0;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p], h = edges[p + 1] - a;
    if (h <= 0.0) continue;
    double part = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double w = a + h * rule.nodes[q];
      const double y = std::max(0.0, z + sigma * w);
      const double direct = std::exp(-w * w);
      double kernel;
      if (derivative) {
        const double shifted = w + 2.0 * b;
        kernel = w * direct + shifted * std::exp(-shifted * shifted);
      } else {
        // exp(-w^2) - exp(-(w+2b)^2) without cancellation near the wall.
        kernel = -direct * std::expm1(-4.0 * b * (w + b));
      }
      part += rule.weights[q] * kernel * profile_.value(y);
    }
    sum += h * part;
  }
  return derivative ? 2.0 / (sigma * kSqrtPi) * sum : sum / kSqrtPi;
}

double ShearSolution::phi(double t, double z) const {
  check_positive_time(t, "phi");
  if (!(z >= 0.0) || !std::isfinite(z)) throw std::domain_error("phi: depth must be finite and >= 0");
  if (z == 0.0) return 0.0;
  return kernel_integral(t, z, false);
}

double ShearSolution::phi_z(double t, double z) const {
  check_positive_time(t, "phi_z");
  if (!(z >= 0.0) || !std::isfinite(z)) throw std::domain_error("phi_z: depth must be finite and >= 0");
  return kernel_integral(t, z, true);
}

double ShearSolution::boundary_gradient(double t) const { return phi_z(t, 0.0); }

double ShearSolution::boundary_integral(double T) const {
  check_positive_time(T, "boundary_integral");
  const double phi0 = profile_.value_at_0();
  if (phi0 == 0.0) return 0.0;
  return -2.0 * half_width_ * phi0 * wall_gradient_integral(T);
}

double ShearSolution::wall_gradient_integral(double T) const {
  check_positive_time(T, "wall_gradient_integral");
  if (profile_.is_zero()) return 0.0;
  // t = s^2 turns the t^{-1/2} endpoint behavior into a smooth integrand.
  const double S = std::sqrt(T);
  auto integrand = [&](double s) { return 2.0 * s * boundary_gradient(s * s); };
  std::vector<double> edges = specfun::graded_edges(0.0, S, S / 1024.0, 2.0, S / 8.0);
  const auto& rule = panel_rule();
  auto integrate = [&](const std::vector<double>& e) {
    double sum = 0.0;
    for (std::size_t p = 0; p + 1 < e.size(); ++p) {
      const double a = e[p], h = e[p + 1] - a;
      double part = 0.0;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) part += rule.weights[q] * integrand(a + h * rule.nodes[q]);
      sum += h * part;
    }
    return sum;
  };
  double coarse = integrate(edges);
  for (int level = 0; level < 6; ++level) {
    std::vector<double> finer;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
      finer.push_back(edges[p]);
      finer.push_back(0.5 * (edges[p] + edges[p + 1]));
    }
    finer.push_back(edges.back());
    const double fine = integrate(finer);
    if (std::abs(fine - coarse) <= 1e-8 * std::abs(fine) + 1e-300) return nu_ * fine;
    coarse = fine;
    edges = std::move(finer);
  }
  throw NumericalError("wall_gradient_integral: time quadrature refinements disagree beyond 1e-8");
}

double ShearSolution::ns_velocity(double t, double z) const {
  if (t == 0.0) return profile_.value(z);
  return phi(t, z);
}

double ShearSolution::truncation_depth(double t) const {
  return kKernelWidth * std::sqrt(4.0 * nu_ * t) + profile_.decay_allowance();
}

specfun::Estimate ShearSolution::l2_error_sq(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("l2_error_sq: t must be >= 0");
  if (t == 0.0 || profile_.is_zero()) return {};
  const double sigma = std::sqrt(4.0 * nu_ * t);
  const double feature = profile_.feature_length();
  const double outer = std::isfinite(feature) ? 0.5 * feature : std::numeric_limits<double>::infinity();
  const double depth = truncation_depth(t);
  // Fine panels across the heat layer, then growing to the profile's scale.
  const double layer = std::min(depth, kKernelWidth * sigma);
  const double inner = std::min(sigma, outer);
  std::vector<double> edges = specfun::graded_edges(0.0, layer, std::min(layer, sigma / 16.0), 2.0, inner);
  if (layer < depth) {
    const auto rest = specfun::graded_edges(layer, depth, inner, 2.0, std::min(outer, depth - layer));
    edges.insert(edges.end(), rest.begin() + 1, rest.end());
  }
  for (double knot : profile_.breakpoints())
    if (knot > 0.0 && knot < depth) edges.push_back(knot);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  const specfun::Estimate e = specfun::integrate_panels(edges, [&](double z) {
    const double d = phi(t, z) - profile_.value(z);
    return d * d;
  });
  return {2.0 * half_width_ * e.value, 2.0 * half_width_ * e.error};
}

}  // namespace vvlab::shear
