#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "panel_math.hpp"
#include "vvlab/diagnostics.hpp"
#include "vvlab/parallel.hpp"

namespace vvlab::diag {
namespace {

// Edges on [0, depth]: graded from sigma/16 at the wall up to sigma inside
// the heat layer (20 sigma), then growing to the profile's own scale.
std::vector<double> depth_edges(const shear::ShearSolution& sol, double t, double depth) {
  const double sigma = std::sqrt(4.0 * sol.nu() * t);
  const double feature = sol.profile().feature_length();
  const double outer_max = std::isfinite(feature) ? 0.5 * feature : std::max(sigma, depth / 8.0);
  const double layer = std::min(depth, 20.0 * sigma);
  std::vector<double> edges = specfun::graded_edges(0.0, layer, std::min(layer, sigma / 16.0), 2.0,
                                                    std::min(sigma, outer_max));
  if (layer < depth) {
    const auto rest = specfun::graded_edges(layer, depth, std::min(sigma, outer_max), 2.0, outer_max);
    edges.insert(edges.end(), rest.begin() + 1, rest.end());
  }
  for (double knot : sol.profile().breakpoints())
    if (knot > 0.0 && knot < depth) edges.push_back(knot);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

// 2L int_0^width |phi_z(t, z)|^p dz
Estimate strip_power(const shear::ShearSolution& sol, double t, double width, double p) {
  const double L2 = 2.0 * sol.half_width();
  Estimate sum;
  const auto edges = depth_edges(sol, t, width);
  for (std::size_t q = 0; q + 1 < edges.size(); ++q) {
    const auto kp = specfun::kronrod_panel(edges[q], edges[q + 1]);
    detail::Samples f;
    for (int i = 0; i < 15; ++i) f[i] = sol.phi_z(t, kp.x[i]);
    const Estimate e = detail::abs_power_panel(kp, edges[q], edges[q + 1], f, p, [](double) { return 1.0; });
    sum.value += L2 * e.value;
    sum.error += L2 * e.error;
  }
  return sum;
}

// int_0^T post(F(t)) dt with t = s^2: F bounded or like t^{-1/2} near 0
// becomes smooth in s. Panels double in s away from the scale where the
// heat layer fills the strip.
template <class Post>
Estimate time_integral(const shear::ShearSolution& sol, double T, double width, double p, Post post) {
  const double S = std::sqrt(T);
  const double s_layer = width / (2.0 * std::sqrt(sol.nu()));
  const double s_min = 1e-3 * std::min(S, s_layer);
  std::vector<double> edges{0.0};
  const auto graded = detail::log_time_edges(s_min, S, 2.0);
  edges.insert(edges.end(), graded.begin(), graded.end());
  Estimate total;
  for (std::size_t q = 0; q + 1 < edges.size(); ++q) {
    const auto kp = specfun::kronrod_panel(edges[q], edges[q + 1]);
    std::array<Estimate, 15> g;
    parallel_for(15, [&](std::size_t i) {
      const double s = kp.x[i];
      const Estimate v = post(strip_power(sol, s * s, width, p));
      g[i] = {2.0 * s * v.value, 2.0 * s * v.error};
    });
    double k = 0.0, gauss = 0.0, inner = 0.0;
    for (int i = 0; i < 15; ++i) {
      k += kp.kronrod_w[i] * g[i].value;
      gauss += kp.gauss_w[i] * g[i].value;
      inner += kp.kronrod_w[i] * g[i].error;
    }
    total.value += k;
    total.error += std::abs(k - gauss) + inner;
  }
  return total;
}

void check_horizon(double T, const char* what) {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument(std::string(what) + ": T must be positive");
}

}  // namespace

Estimate kato_layer_enstrophy(const shear::ShearSolution& sol, double T, const LayerSpec& layer) {
  check_horizon(T, "kato_layer_enstrophy");
  if (!(layer.kato_constant > 0.0)) throw std::invalid_argument("kato_layer_enstrophy: c must be positive");
  const double width = layer.kato_constant * sol.nu();
  if (width >= 1.0) throw std::invalid_argument("kato_layer_enstrophy: layer c*nu is wider than the domain");
  if (sol.profile().is_zero()) return {};
  const Estimate e = time_integral(sol, T, width, 2.0, [](Estimate f) { return f; });
  return {sol.nu() * e.value, sol.nu() * e.error};
}

Estimate layer_l1_mass(const shear::ShearSolution& sol, double T, double delta) {
  check_horizon(T, "layer_l1_mass");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("layer_l1_mass: delta must be positive");
  if (sol.profile().is_zero()) return {};
  const Estimate e = time_integral(sol, T, delta, 1.0, [](Estimate f) {
    return Estimate{f.value * f.value, 2.0 * std::abs(f.value) * f.error + f.error * f.error};
  });
  const double value = std::sqrt(std::max(0.0, e.value));
  return {value, value > 0.0 ? std::min(e.error / (2.0 * value), std::sqrt(e.error)) : std::sqrt(e.error)};
}

// The wall z = 0 is traversed with the fluid on the left, so tau = +e_1 and
// u-bar . tau = phi0(0); the vorticity of (phi(z), 0) is -phi_z.
SheetPairing sheet_pairing(const shear::ShearSolution& sol, const TestFunction& f, double t) {
  if (f.kind() != TestFunction::Kind::channel)
    throw std::invalid_argument("sheet_pairing: channel flow needs a channel test function");
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("sheet_pairing: t must be positive");
  const double L2 = 2.0 * sol.half_width();
  const auto& profile = sol.profile();
  const double depth = sol.truncation_depth(t);
  const auto edges = depth_edges(sol, t, depth);
  Estimate lhs, euler;
  for (std::size_t q = 0; q + 1 < edges.size(); ++q) {
    const Estimate a = specfun::integrate_kronrod([&](double z) { return -L2 * sol.phi_z(t, z) * f.value(z); },
                                                  edges[q], edges[q + 1]);
    const Estimate b = specfun::integrate_kronrod(
        [&](double z) { return -L2 * profile.derivative(z) * f.value(z); }, edges[q], edges[q + 1]);
    lhs.value += a.value;
    lhs.error += a.error;
    euler.value += b.value;
    euler.error += b.error;
  }
  SheetPairing out;
  out.lhs = lhs.value;
  out.boundary_term = L2 * profile.value_at_0() * f.value(0.0);
  out.rhs = euler.value - out.boundary_term;
  out.gap = std::abs(out.lhs - out.rhs);
  out.error = lhs.error + euler.error + 1e-14 * (std::abs(out.lhs) + std::abs(out.boundary_term));
  return out;
}

Estimate boundary_flux(const shear::ShearSolution& sol, double T, double phi) {
  check_horizon(T, "boundary_flux");
  if (phi == 0.0 || sol.profile().is_zero()) return {};
  const double value = -2.0 * sol.half_width() * phi * sol.wall_gradient_integral(T);
  return {value, 1e-8 * std::abs(value)};
}

std::vector<Estimate> lp_norm_scan(const shear::ShearSolution& sol, double t, const std::vector<double>& p_list) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("lp_norm_scan: t must be positive");
  for (double p : p_list)
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm_scan: p must be >= 1");
  std::vector<Estimate> out(p_list.size());
  if (sol.profile().is_zero()) return out;
  const double depth = sol.truncation_depth(t);
  for (std::size_t i = 0; i < p_list.size(); ++i) {
    const double p = p_list[i];
    if (std::isinf(p)) {
      constexpr int kGrid = 4096;
      double sup = 0.0;
      for (int k = 0; k < kGrid; ++k) sup = std::max(sup, std::abs(sol.phi_z(t, depth * k / (kGrid - 1))));
      out[i] = {sup, 0.0};
      continue;
    }
    const Estimate s = strip_power(sol, t, depth, p);
    const double v = std::pow(s.value, 1.0 / p);
    out[i] = {v, s.value > 0.0 ? v * s.error / (p * s.value) : std::pow(s.error, 1.0 / p)};
  }
  return out;
}

}  // namespace vvlab::diag
