#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vvlab/disk_flow.hpp"
#include "vvlab/shear_flow.hpp"

namespace vvlab::rates {

inline constexpr std::size_t kDefaultTimeGrid = 64;

// sup over a geometric time grid of ||u(t) - u-bar(t)||_{L^2}. The grid sup
// is a lower bound of the true sup. tail is the width of the interval the
// sup is known to lie in, from series remainders or quadrature error.
struct SupError {
  double value = 0.0;
  double tail = 0.0;
  double t_at_max = 0.0;
};

// Geometric grid T*1e-6 ... T with n points.
std::vector<double> time_grid(double T, std::size_t n);

// Throws NumericalError when tail exceeds 1e-8 * value.
SupError sup_l2_error(const disk::DiskSpectralSolution& ns, const disk::EulerDiskSolution& euler, double T,
                      std::size_t time_grid_size = kDefaultTimeGrid);
SupError sup_l2_error(const shear::ShearSolution& ns, double T, std::size_t time_grid_size = kDefaultTimeGrid);

enum class Flow { disk, shear };

struct NamedValue {
  std::string name;
  double value = 0.0;
  double error = 0.0;
};

// Both solutions of one row, handed to per-row diagnostics. Exactly one of
// the disk pair or the shear solution is set.
struct RowContext {
  double nu = 0.0;
  double T = 0.0;
  const disk::DiskSpectralSolution* disk_ns = nullptr;
  const disk::EulerDiskSolution* disk_euler = nullptr;
  const shear::ShearSolution* shear_ns = nullptr;
};

struct Experiment {
  Flow flow = Flow::disk;
  std::optional<disk::RadialProfile> disk_profile;
  std::optional<shear::ShearProfile> shear_profile;
  double T = 1.0;
  // Lower limit on modes; raised to what the horizon needs.
  std::size_t modes = 2000;
  double half_width = 0.5;
  std::size_t time_grid_size = kDefaultTimeGrid;
  // Extra per-row values, evaluated after the sup error.
  std::function<std::vector<NamedValue>(const RowContext&)> per_row;
  // Stable description of everything above, used for the fingerprint.
  std::string describe() const;
};

// Mode count for a disk row: the request, or enough for nu j^2 T past the cut.
std::size_t disk_modes(const Experiment& experiment, double nu);

struct Row {
  double nu = 0.0;
  SupError sup;
  std::vector<NamedValue> values;
};

struct Fit {
  double alpha = 0.0;
  double prefactor = 0.0;
  // RMS of the log10 residuals.
  double residual = 0.0;
  std::size_t points = 0;
};

struct SweepResult {
  std::vector<Row> rows;  // nu strictly decreasing
  std::optional<Fit> fit;
  std::string fit_refusal;
  std::string fingerprint;
};

// Slope between each row and the previous one; NaN for the first row.
std::vector<double> running_alpha(const std::vector<Row>& rows);

// Raised by nu_sweep; nu() names the failing row.
class RowFailure : public std::runtime_error {
 public:
  RowFailure(double nu, const std::string& what);
  double nu() const { return nu_; }

 private:
  double nu_;
};

// Raised by fit_rate when the data do not support a power law.
class FitRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rows are computed in parallel and returned sorted by decreasing nu. The
// fit is attempted; a refusal is recorded, not thrown.
SweepResult nu_sweep(const Experiment& experiment, const std::vector<double>& nu_grid);

// Least squares of log10(sup_error) on log10(nu).
Fit fit_rate(const std::vector<Row>& rows);
inline Fit fit_rate(const SweepResult& sweep) { return fit_rate(sweep.rows); }

inline constexpr double kMaxResidual = 0.05;

// 5 points per decade from lo to hi inclusive, decreasing.
std::vector<double> default_nu_grid(double lo = 1e-6, double hi = 1e-2);

}  // namespace vvlab::rates
