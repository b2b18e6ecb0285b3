#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "panel_math.hpp"
#include "vvlab/diagnostics.hpp"
#include "vvlab/errors.hpp"

namespace vvlab::diag {
namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);
constexpr double kVorticityEnvelope = 0.7213;
// Series are certified once every dropped mode has nu j^2 t >= 45.
constexpr double kCutExponent = 45.0;
// Up to width^2 / (92 nu) the wall layer leaks at most exp(-23) of itself
// past a strip of that width.
constexpr double kHeadRatio = 92.0;

struct RadialGrid {
  std::vector<double> lo, hi;
  std::vector<specfun::KronrodPanel> panels;
  std::vector<double> radii;  // 15 per panel
};

// Panels on [1 - width, 1], graded away from the wall.
RadialGrid wall_grid(double width, double first, double max_width) {
  const auto d = specfun::graded_edges(0.0, width, first, 2.0, max_width);
  RadialGrid g;
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    const double a = 1.0 - d[i + 1], b = 1.0 - d[i];
    g.lo.push_back(a);
    g.hi.push_back(b);
    g.panels.push_back(specfun::kronrod_panel(a, b));
    g.radii.insert(g.radii.end(), g.panels.back().x.begin(), g.panels.back().x.end());
  }
  return g;
}

RadialGrid time_grid(double nu, double t, double width) {
  const double layer = std::sqrt(nu * t);
  return wall_grid(width, std::min(width, 0.25 * layer), std::min(width, std::max(layer, 1.0 / 64.0)));
}

// int over the grid of |omega|^p 2 pi r (or the signed integral when
// `absolute` is false) for every time of the block.
std::vector<Estimate> strip_power(const disk::VorticityBlock& block, const RadialGrid& grid, double p,
                                  bool absolute) {
  const auto weight = [](double r) { return 2.0 * kPi * r; };
  const double area = kPi * (grid.hi.back() * grid.hi.back() - grid.lo.front() * grid.lo.front());
  std::vector<Estimate> out(block.time_count);
  for (std::size_t m = 0; m < block.time_count; ++m) {
    Estimate sum;
    double peak = 0.0;
    for (std::size_t q = 0; q < grid.panels.size(); ++q) {
      detail::Samples f;
      for (int i = 0; i < 15; ++i) {
        f[i] = block.at(m, q * 15 + i);
        peak = std::max(peak, std::abs(f[i]));
      }
      Estimate e;
      if (absolute) {
        e = detail::abs_power_panel(grid.panels[q], grid.lo[q], grid.hi[q], f, p, weight);
      } else {
        double k = 0.0, g = 0.0;
        for (int i = 0; i < 15; ++i) {
          const double v = f[i] * weight(grid.panels[q].x[i]);
          k += grid.panels[q].kronrod_w[i] * v;
          g += grid.panels[q].gauss_w[i] * v;
        }
        e = {k, std::abs(k - g)};
      }
      sum.value += e.value;
      sum.error += e.error;
    }
    const double tail = block.tail_bounds[m];
    sum.error += area * (p * std::pow(peak, p - 1.0) * tail + std::pow(tail, p));
    out[m] = sum;
  }
  return out;
}

// int_{t0}^T post(F(t)) dt with F(t) the strip integral above, on time
// panels doubling in length.
template <class Post>
Estimate body_integral(const disk::DiskSpectralSolution& sol, double t0, double T, double width, double p,
                       Post post) {
  Estimate total;
  const auto edges = detail::log_time_edges(t0, T, 2.0);
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const auto kp = specfun::kronrod_panel(edges[s], edges[s + 1]);
    const std::vector<double> times(kp.x.begin(), kp.x.end());
    const RadialGrid grid = time_grid(sol.nu(), edges[s], width);
    const auto block = sol.vorticity_block(times, grid.radii);
    const auto F = strip_power(block, grid, p, true);
    double k = 0.0, g = 0.0, inner = 0.0;
    for (int i = 0; i < 15; ++i) {
      const Estimate v = post(F[i]);
      k += kp.kronrod_w[i] * v.value;
      g += kp.gauss_w[i] * v.value;
      inner += kp.kronrod_w[i] * v.error;
    }
    total.value += k;
    total.error += std::abs(k - g) + inner;
  }
  return total;
}

void require_modes(const disk::DiskSpectralSolution& sol, double t_min, const char* what) {
  const std::size_t K = sol.mode_count();
  const double j = specfun::zero_lower_bound(K + 1);
  if (sol.nu() * j * j * t_min < kCutExponent)
    throw NumericalError(std::string(what) + ": needs at least " +
                         std::to_string(modes_for_time(sol.nu(), t_min)) + " modes, solution has " +
                         std::to_string(K));
}

// Gauss panels over the profile's smooth pieces restricted to [a, b].
template <class F>
double profile_integral(const disk::RadialProfile& profile, double a, double b, F&& f) {
  std::vector<double> edges{a};
  for (double x : profile.breakpoints())
    if (x > a && x < b) edges.push_back(x);
  edges.push_back(b);
  double sum = 0.0;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double h = (edges[s + 1] - edges[s]) / 8.0;
    for (int q = 0; q < 8; ++q) sum += specfun::integrate_kronrod(f, edges[s] + q * h, edges[s] + (q + 1) * h).value;
  }
  return sum;
}

double laplacian_sup(const disk::RadialProfile& profile) {
  double sup = 0.0;
  for (int i = 0; i <= 512; ++i) sup = std::max(sup, std::abs(profile.laplacian(i / 512.0)));
  return sup;
}

void check_horizon(double T, const char* what) {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument(std::string(what) + ": T must be positive");
}

double hypot_sum(double a, double b) { return std::sqrt(a * a + b * b); }

}  // namespace

std::size_t modes_for_time(double nu, double t_min) {
  if (!(nu > 0.0) || !(t_min > 0.0)) throw std::invalid_argument("modes_for_time: nu and t must be positive");
  // j_{K+1} >= pi (K + 5/4) - 0.1 must reach sqrt(45 / (nu t)).
  const double j = std::sqrt(kCutExponent / (nu * t_min));
  const double k = (j + 0.1) / kPi - 1.25;
  return k <= 1.0 ? 1 : static_cast<std::size_t>(std::ceil(k));
}

namespace {

double l1_head_time(double nu, double width, double T) { return std::min(width * width / (kHeadRatio * nu), 1e-3 * T); }
double kato_head_time(double nu, double width, double T) { return std::min(width * width / (kHeadRatio * nu), T); }

}  // namespace

std::size_t layer_modes_required(double nu, double width, double T) {
  return modes_for_time(nu, l1_head_time(nu, width, T));
}

std::size_t kato_modes_required(double nu, double kato_constant, double T) {
  return modes_for_time(nu, kato_head_time(nu, kato_constant * nu, T));
}

Estimate kato_layer_enstrophy(const disk::DiskSpectralSolution& sol, double T, const LayerSpec& layer) {
  check_horizon(T, "kato_layer_enstrophy");
  const double nu = sol.nu();
  const double width = layer.kato_constant * nu;
  if (!(layer.kato_constant > 0.0)) throw std::invalid_argument("kato_layer_enstrophy: c must be positive");
  if (width >= 1.0) throw std::invalid_argument("kato_layer_enstrophy: layer c*nu is wider than the disk");
  if (sol.profile().is_zero()) return {};

  // Head: the energy identity gives nu int_0^th ||omega||^2 over the whole
  // disk; while the wall layer still sits inside the strip, the part outside
  // is omega0 up to O(nu t) and is subtracted.
  const double th = kato_head_time(nu, width, T);
  require_modes(sol, th, "kato_layer_enstrophy");
  const disk::Bracket e = sol.energy(th);
  const double e0 = sol.initial_energy();
  const auto& profile = sol.profile();
  const double outside_sq = profile_integral(profile, 0.0, 1.0 - width, [&](double r) {
    const double w = profile.value(r);
    return 2.0 * kPi * w * w * r;
  });
  const double head = 0.5 * (e0 - 0.5 * (e.lower + e.upper)) - nu * th * outside_sq;
  const double drift = nu * th * laplacian_sup(profile) * kSqrtPi;
  double head_error = 0.25 * (e.upper - e.lower) + nu * th * (2.0 * std::sqrt(outside_sq) * drift + drift * drift) +
                      1e-9 * std::abs(head) + 1e-15 * e0;

  Estimate body;
  if (th < T) body = body_integral(sol, th, T, width, 2.0, [](Estimate f) { return f; });
  return {head + nu * body.value, head_error + nu * body.error};
}

Estimate layer_l1_mass(const disk::DiskSpectralSolution& sol, double T, double delta) {
  check_horizon(T, "layer_l1_mass");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("layer_l1_mass: need 0 < delta < 1");
  if (sol.profile().is_zero()) return {};
  const double nu = sol.nu();
  const double th = l1_head_time(nu, delta, T);
  require_modes(sol, th, "layer_l1_mass");

  // Head: as t -> 0 the strip holds omega0 plus the forming sheet of mass
  // -m, so F(0+) = int_strip |omega0| + |m|; F grows like sqrt(t) from there.
  const auto& profile = sol.profile();
  const double f0 = profile_integral(profile, 1.0 - delta, 1.0,
                                     [&](double r) { return 2.0 * kPi * std::abs(profile.value(r)) * r; }) +
                    std::abs(sol.total_mass());
  const RadialGrid grid = time_grid(nu, th, delta);
  const auto fh = strip_power(sol.vorticity_block({th}, grid.radii), grid, 1.0, true)[0];
  const double d = fh.value - f0;
  const double head = th * (f0 * f0 + 4.0 / 3.0 * f0 * d + 0.5 * d * d);
  const double head_error = th * std::abs(d) * (f0 + std::abs(d)) + th * 2.0 * (f0 + std::abs(d)) * fh.error;

  const Estimate body = body_integral(sol, th, T, delta, 1.0, [](Estimate f) {
    return Estimate{f.value * f.value, 2.0 * std::abs(f.value) * f.error + f.error * f.error};
  });
  const double sq = head + body.value;
  const double value = std::sqrt(std::max(0.0, sq));
  const double err = head_error + body.error;
  return {value, value > 0.0 ? std::min(err / (2.0 * value), std::sqrt(err)) : std::sqrt(err)};
}

namespace {

// int_0^1 J0(j r) f(r) r dr by panels, one per half oscillation.
double bessel_pairing_quadrature(const TestFunction& f, double j) {
  const auto panels = static_cast<std::size_t>(std::max(7.0, std::ceil(j / kPi)));
  double sum = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = static_cast<double>(p) / panels, b = static_cast<double>(p + 1) / panels;
    sum += specfun::integrate_kronrod([&](double r) { return specfun::bessel_j(0, j * r) * f.value(r) * r; }, a, b)
               .value;
  }
  return sum;
}

// P_k = int_0^1 J0(j_k r) f(r) r dr
double mode_pairing(const TestFunction& f, const specfun::BesselTable& table, std::size_t k) {
  const double j = table.zero(k);
  if (f.kind() == TestFunction::Kind::bessel_mode) {
    // Lommel: J0(j_1 r) and J0(j_k r) are orthogonal with weight r for k != 1.
    return k == 1 ? 0.5 * table.j0_at_zero(1) * table.j0_at_zero(1) : 0.0;
  }
  const auto& b = f.coefficients();
  const auto m = specfun::bessel_moments(j, table.j0_at_zero(k), 0.0, static_cast<int>(b.size()));
  if (m.amplification > 1e4) return bessel_pairing_quadrature(f, j);
  double sum = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) sum += b[i] * m.u[i];
  return sum;
}

void require_disk_function(const TestFunction& f, const char* what) {
  if (!f.on_disk()) throw std::invalid_argument(std::string(what) + ": test function must live on the disk");
}

double abs_moment(const TestFunction& f) {
  double sum = 0.0;
  for (int p = 0; p < 16; ++p)
    sum += specfun::integrate_kronrod([&](double r) { return std::abs(f.value(r)) * r; }, p / 16.0, (p + 1) / 16.0)
               .value;
  return 2.0 * kPi * sum;
}

}  // namespace

SheetPairing sheet_pairing(const disk::DiskSpectralSolution& ns, const disk::EulerDiskSolution& euler,
                           const TestFunction& f, double t) {
  require_disk_function(f, "sheet_pairing");
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("sheet_pairing: t must be positive");
  SheetPairing out;
  const auto& table = ns.table();
  const std::size_t n = ns.active_modes(t);
  const double nu = ns.nu();
  double lhs = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double j = table.zero(k);
    const double a = ns.coefficients()[k - 1];
    if (a == 0.0) continue;
    lhs += a * std::exp(-nu * j * j * t) * ns.mode_norm(k) * j * 2.0 * kPi * mode_pairing(f, table, k);
  }
  const double tail = kVorticityEnvelope * ns.coefficient_bound() * ns.gaussian_tail(t, 0.5, n) * abs_moment(f);
  const auto& profile = euler.profile();
  const double euler_pair =
      profile_integral(profile, 0.0, 1.0, [&](double r) { return 2.0 * kPi * profile.value(r) * f.value(r) * r; });
  out.lhs = lhs;
  out.boundary_term = 2.0 * kPi * euler.boundary_speed() * f.value(1.0);
  out.rhs = euler_pair - out.boundary_term;
  out.gap = std::abs(out.lhs - out.rhs);
  out.error = tail + 1e-14 * (std::abs(euler_pair) + std::abs(out.boundary_term) + std::abs(lhs));
  return out;
}

namespace {

// nu int_0^T omega(t, 1) dt = sum_k c_k (1 - e^{-nu j_k^2 T}) / j_k^2 with
// c_k = a_k j_k sign_k / sqrt(pi). The c_k settle to -m / pi, which with
// the exact Rayleigh remainder 1/8 - sum j^{-2} closes the sum.
Estimate wall_vorticity_integral(const disk::DiskSpectralSolution& sol, double T) {
  check_horizon(T, "boundary_flux");
  const auto& table = sol.table();
  const std::size_t K = sol.mode_count();
  const double nu = sol.nu();
  const double c_inf = -sol.total_mass() / kPi;
  double sum = 0.0, spread = 0.0;
  const std::size_t watch = K - std::min<std::size_t>(K, std::max<std::size_t>(10, K / 10));
  for (std::size_t k = 1; k <= K; ++k) {
    const double j = table.zero(k);
    const double c = sol.coefficients()[k - 1] * j * table.sign(k) / kSqrtPi;
    sum += c * -std::expm1(-nu * j * j * T) / (j * j);
    if (k > watch) spread = std::max(spread, std::abs(c - c_inf));
  }
  const double rest = table.inverse_square_tail(K);
  const double decayed = sol.gaussian_tail(T, -2.0, K);
  const double value = sum + c_inf * (rest - decayed);
  return {value, 2.0 * spread * rest + 1e-15 * (std::abs(sum) + std::abs(c_inf) * rest) + 1e-300};
}

}  // namespace

Estimate boundary_flux(const disk::DiskSpectralSolution& sol, double T, double phi) {
  if (phi == 0.0 || sol.profile().is_zero()) return {};
  const Estimate w = wall_vorticity_integral(sol, T);
  return {2.0 * kPi * phi * w.value, 2.0 * kPi * std::abs(phi) * w.error};
}

Estimate boundary_flux(const disk::DiskSpectralSolution& sol, double T,
                       const std::function<double(double)>& phi_of_theta) {
  // The trapezoid rule is spectrally accurate for smooth periodic phi.
  constexpr int kNodes = 512;
  double mean = 0.0;
  for (int i = 0; i < kNodes; ++i) mean += phi_of_theta(2.0 * kPi * i / kNodes);
  mean /= kNodes;
  return boundary_flux(sol, T, mean);
}

Estimate boundary_flux_tangential(const disk::DiskSpectralSolution& ns, const disk::EulerDiskSolution& euler,
                                  double T) {
  return boundary_flux(ns, T, euler.boundary_speed());
}

MassBudget mass_budget(const disk::DiskSpectralSolution& ns, const disk::EulerDiskSolution& euler,
                       const LayerSpec& layer, double t, double f_nu) {
  layer.validate(1.0);
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("mass_budget: t must be positive");
  MassBudget out;
  out.t = t;
  out.delta = layer.delta;
  out.delta_star = layer.delta_star;
  out.f_nu = f_nu;
  out.bound_scale = layer.delta + f_nu / std::sqrt(layer.delta - layer.delta_star);
  out.m = euler.mass(t);
  if (ns.profile().is_zero()) return out;

  // Stokes: the mass inside radius R is the circulation 2 pi R u(R).
  const double R = 1.0 - layer.delta;
  const disk::SeriesValue u = ns.velocity(t, R);
  out.mass_outside = 2.0 * kPi * R * u.value;
  double error = 2.0 * kPi * R * u.tail_bound;

  const RadialGrid grid = time_grid(ns.nu(), t, layer.delta);
  const auto inside = strip_power(ns.vorticity_block({t}, grid.radii), grid, 1.0, false)[0];
  out.mass_inside = inside.value;
  error += inside.error;

  // (omega, psi) with psi = 1 - phi_delta, integrated by parts against the
  // velocity: the wall term vanishes by no-slip and psi' lives in the gap.
  Estimate pairing;
  const double a = 1.0 - layer.delta, b = 1.0 - layer.delta_star;
  for (int p = 0; p < 8; ++p) {
    double tail = 0.0;
    const Estimate e = specfun::integrate_kronrod(
        [&](double r) {
          const disk::SeriesValue v = ns.velocity(t, r);
          const double dpsi = specfun::smooth_cutoff_derivative(layer, 1.0 - r);
          tail = std::max(tail, v.tail_bound * std::abs(dpsi));
          return -2.0 * kPi * r * v.value * dpsi;
        },
        a + (b - a) * p / 8.0, a + (b - a) * (p + 1) / 8.0);
    pairing.value += e.value;
    pairing.error += e.error + 2.0 * kPi * tail * (b - a) / 8.0;
  }
  out.cutoff_pairing = pairing.value;
  out.cutoff_gap = std::abs(pairing.value - out.m);
  out.error = error + pairing.error;
  return out;
}

std::vector<Estimate> lp_norm_scan(const disk::DiskSpectralSolution& sol, double t,
                                   const std::vector<double>& p_list) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("lp_norm_scan: t must be positive");
  for (double p : p_list)
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm_scan: p must be >= 1");
  std::vector<Estimate> out(p_list.size());
  if (sol.profile().is_zero()) return out;

  const RadialGrid grid = time_grid(sol.nu(), t, 1.0);
  const auto block = sol.vorticity_block({t}, grid.radii);
  bool want_sup = false;
  for (std::size_t i = 0; i < p_list.size(); ++i) {
    const double p = p_list[i];
    if (std::isinf(p)) {
      want_sup = true;
      continue;
    }
    const Estimate s = strip_power(block, grid, p, true)[0];
    const double v = std::pow(s.value, 1.0 / p);
    out[i] = {v, s.value > 0.0 ? v * s.error / (p * s.value) : std::pow(s.error, 1.0 / p)};
  }
  if (want_sup) {
    constexpr int kGrid = 4096;
    std::vector<double> radii(kGrid);
    for (int i = 0; i < kGrid; ++i) radii[i] = static_cast<double>(i) / (kGrid - 1);
    const auto b = sol.vorticity_block({t}, radii);
    double sup = 0.0;
    for (int i = 0; i < kGrid; ++i) sup = std::max(sup, std::abs(b.at(0, i)));
    for (std::size_t i = 0; i < p_list.size(); ++i)
      if (std::isinf(p_list[i])) out[i] = {sup, b.tail_bounds[0]};
  }
  return out;
}

Estimate weak_velocity_pairing(const disk::DiskSpectralSolution& ns, const disk::EulerDiskSolution& euler,
                               const AzimuthalTestField& v, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("weak_velocity_pairing: t must be >= 0");
  if (!(v.norm_sq() > 0.0)) throw std::invalid_argument("weak_velocity_pairing: test field has zero norm");
  if (euler.profile().describe() != ns.profile().describe())
    throw std::invalid_argument("weak_velocity_pairing: Euler and Navier-Stokes data differ");
  const auto& a = ns.coefficients();
  const auto& c = v.coefficients();
  const std::size_t n = std::min(a.size(), c.size());
  const double nu = ns.nu();
  double sum = 0.0, scale = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double j = ns.table().zero(k);
    const double d = a[k - 1] * std::expm1(-nu * j * j * t);
    sum += d * c[k - 1];
    scale += std::abs(d * c[k - 1]);
  }
  // Modes past the common range pair through Cauchy-Schwarz; beyond its own
  // coefficients each side is bounded by its Parseval remainder.
  double field_rest = v.tail_norm(), flow_rest_sq = ns.parseval_remainder();
  for (std::size_t k = n; k < c.size(); ++k) field_rest = hypot_sum(field_rest, c[k]);
  for (std::size_t k = n; k < a.size(); ++k) flow_rest_sq += a[k] * a[k];
  const double error = std::sqrt(flow_rest_sq) * field_rest + 1e-15 * scale;
  const double norm = std::sqrt(v.norm_sq());
  return {std::abs(sum) / norm, error / norm};
}

}  // namespace vvlab::diag
