#include "vvlab/rates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "vvlab/errors.hpp"
#include "vvlab/parallel.hpp"

namespace vvlab::rates {
namespace {

constexpr double kTailTolerance = 1e-8;
constexpr double kCutExponent = 45.0;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void check_horizon(double T, std::size_t n) {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("sup_l2_error: T must be positive");
  if (n < 2) throw std::invalid_argument("sup_l2_error: time grid needs at least 2 points");
}

// Per time: the squared error lies in [lower, upper]. The sup of the root
// over the grid lies between the largest lower and the largest upper root.
SupError sup_from_brackets(const std::vector<double>& times, const std::vector<double>& lower,
                           const std::vector<double>& upper) {
  SupError out;
  double hi = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double lo = std::sqrt(std::max(0.0, lower[i]));
    if (lo > out.value) {
      out.value = lo;
      out.t_at_max = times[i];
    }
    hi = std::max(hi, std::sqrt(std::max(0.0, upper[i])));
  }
  out.tail = std::max(0.0, hi - out.value);
  if (out.tail > kTailTolerance * out.value)
    throw NumericalError("sup_l2_error: remainder " + fmt(out.tail) + " exceeds 1e-8 of " + fmt(out.value));
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::vector<double> time_grid(double T, std::size_t n) {
  check_horizon(T, n);
  std::vector<double> t(n);
  const double step = std::log(1e6) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) t[i] = T * std::exp(-step * static_cast<double>(n - 1 - i));
  t.back() = T;
  return t;
}

SupError sup_l2_error(const disk::DiskSpectralSolution& ns, const disk::EulerDiskSolution& euler, double T,
                      std::size_t time_grid_size) {
  if (ns.profile().describe() != euler.profile().describe())
    throw std::invalid_argument("sup_l2_error: Navier-Stokes and Euler solutions start from different data");
  const auto times = time_grid(T, time_grid_size);
  if (ns.profile().is_zero()) return {0.0, 0.0, T};
  std::vector<double> lower(times.size()), upper(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const disk::Bracket b = ns.error_energy(times[i]);
    lower[i] = b.lower;
    upper[i] = b.upper;
  }
  return sup_from_brackets(times, lower, upper);
}

SupError sup_l2_error(const shear::ShearSolution& ns, double T, std::size_t time_grid_size) {
  const auto times = time_grid(T, time_grid_size);
  if (ns.profile().is_zero()) return {0.0, 0.0, T};
  std::vector<double> lower(times.size()), upper(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const specfun::Estimate e = ns.l2_error_sq(times[i]);
    lower[i] = e.value - e.error;
    upper[i] = e.value + e.error;
  }
  SupError out = sup_from_brackets(times, lower, upper);
  // Report the quadrature value itself rather than its lower end.
  const auto it = std::find(times.begin(), times.end(), out.t_at_max);
  const std::size_t i = static_cast<std::size_t>(it - times.begin());
  out.value = std::sqrt(std::max(0.0, 0.5 * (lower[i] + upper[i])));
  return out;
}

std::string Experiment::describe() const {
  std::ostringstream s;
  s << (flow == Flow::disk ? "disk" : "shear") << ";profile=";
  if (flow == Flow::disk && disk_profile) s << disk_profile->describe();
  if (flow == Flow::shear && shear_profile) s << shear_profile->describe() << ";L=" << fmt(half_width);
  s << ";T=" << fmt(T) << ";grid=" << time_grid_size;
  if (flow == Flow::disk) s << ";K>=" << modes;
  return s.str();
}

std::size_t disk_modes(const Experiment& experiment, double nu) {
  const double j = std::sqrt(kCutExponent / (nu * experiment.T));
  // j_{K+1} >= pi (K + 5/4) - 0.1
  const double k = std::ceil((j + 0.1) / std::numbers::pi - 1.25);
  return std::max<std::size_t>(experiment.modes, k < 1.0 ? 1 : static_cast<std::size_t>(k));
}

RowFailure::RowFailure(double nu, const std::string& what)
    : std::runtime_error("nu = " + fmt(nu) + ": " + what), nu_(nu) {}

std::vector<double> running_alpha(const std::vector<Row>& rows) {
  std::vector<double> out(rows.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double a = rows[i - 1].sup.value, b = rows[i].sup.value;
    if (a > 0.0 && b > 0.0) out[i] = std::log(b / a) / std::log(rows[i].nu / rows[i - 1].nu);
  }
  return out;
}

SweepResult nu_sweep(const Experiment& experiment, const std::vector<double>& nu_grid) {
  if (nu_grid.size() < 4) throw std::invalid_argument("nu_sweep: need at least 4 viscosities");
  for (double nu : nu_grid)
    if (!(nu > 0.0) || !std::isfinite(nu)) throw std::invalid_argument("nu_sweep: nu must be positive, got " + fmt(nu));
  std::vector<double> grid = nu_grid;
  std::sort(grid.begin(), grid.end(), std::greater<>());
  if (std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    throw std::invalid_argument("nu_sweep: repeated viscosity in grid");
  if (grid.front() / grid.back() < 100.0 * (1.0 - 1e-12))
    throw std::invalid_argument("nu_sweep: grid must span at least two decades");
  if (experiment.flow == Flow::disk && !experiment.disk_profile)
    throw std::invalid_argument("nu_sweep: disk experiment without a profile");
  if (experiment.flow == Flow::shear && !experiment.shear_profile)
    throw std::invalid_argument("nu_sweep: shear experiment without a profile");

  std::shared_ptr<const specfun::BesselTable> table;
  if (experiment.flow == Flow::disk) table = specfun::shared_j1_zeros(disk_modes(experiment, grid.back()));

  SweepResult result;
  result.rows.resize(grid.size());
  std::vector<std::string> failures(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const double nu = grid[i];
    Row& row = result.rows[i];
    row.nu = nu;
    try {
      RowContext ctx{nu, experiment.T, nullptr, nullptr, nullptr};
      if (experiment.flow == Flow::disk) {
        const disk::DiskSpectralSolution ns(*experiment.disk_profile, table->prefix(disk_modes(experiment, nu)), nu);
        const disk::EulerDiskSolution euler(*experiment.disk_profile);
        row.sup = sup_l2_error(ns, euler, experiment.T, experiment.time_grid_size);
        ctx.disk_ns = &ns;
        ctx.disk_euler = &euler;
        if (experiment.per_row) row.values = experiment.per_row(ctx);
      } else {
        const shear::ShearSolution ns(*experiment.shear_profile, nu, experiment.half_width);
        row.sup = sup_l2_error(ns, experiment.T, experiment.time_grid_size);
        ctx.shear_ns = &ns;
        if (experiment.per_row) row.values = experiment.per_row(ctx);
      }
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });
  // Report the largest failing nu so the message does not depend on timing.
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!failures[i].empty()) throw RowFailure(grid[i], failures[i]);

  result.fingerprint = [&] {
    std::string text = experiment.describe() + ";nu=";
    for (double nu : grid) text += fmt(nu) + ",";
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
    return std::string(buf);
  }();
  try {
    result.fit = fit_rate(result.rows);
  } catch (const FitRefused& e) {
    result.fit_refusal = e.what();
  }
  return result;
}

Fit fit_rate(const std::vector<Row>& rows) {
  if (rows.size() < 4) throw FitRefused("fit_rate: need at least 4 rows, have " + std::to_string(rows.size()));
  const std::size_t n = rows.size();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(rows[i].nu > 0.0)) throw FitRefused("fit_rate: nu must be positive");
    if (!(rows[i].sup.value > 0.0))
      throw FitRefused("fit_rate: sup_error is not positive at nu = " + fmt(rows[i].nu));
    x[i] = std::log10(rows[i].nu);
    y[i] = std::log10(rows[i].sup.value);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 1e-12 * static_cast<double>(n))) throw FitRefused("fit_rate: degenerate input, nu does not vary");
  Fit fit;
  fit.points = n;
  fit.alpha = sxy / sxx;
  const double intercept = my - fit.alpha * mx;
  fit.prefactor = std::pow(10.0, intercept);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (intercept + fit.alpha * x[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  if (fit.residual > kMaxResidual)
    throw FitRefused("fit_rate: residual " + fmt(fit.residual) + " in log10 exceeds 0.05, data are not a power law");
  return fit;
}

std::vector<double> default_nu_grid(double lo, double hi) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("default_nu_grid: need 0 < lo < hi");
  const int steps = static_cast<int>(std::lround(5.0 * std::log10(hi / lo)));
  std::vector<double> out;
  for (int i = 0; i <= steps; ++i) out.push_back(hi * std::pow(10.0, -i / 5.0));
  return out;
}

}  // namespace vvlab::rates
