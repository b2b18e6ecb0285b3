#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "vvlab/disk_flow.hpp"
#include "vvlab/errors.hpp"
#include "vvlab/parallel.hpp"

namespace vvlab::disk {
namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

// |J1| <= 0.5819 and 1/|J0(j_k)| <= 1.02 sqrt(pi j_k / 2) give these
// per-mode envelopes in units of A = max |a_k| j_k.
constexpr double kVelocityEnvelope = 0.4197;   // times j^{-1/2}
constexpr double kVorticityEnvelope = 0.7213;  // times j^{1/2}

// Modes with nu j^2 t beyond this contribute below 1e-19 of their weight.
constexpr double kUnderflowExponent = 45.0;
constexpr double kPointTolerance = 1e-10;

// The moment recurrence is abandoned above this cancellation factor.
constexpr double kMaxAmplification = 1e4;

double quadrature_coefficient(const RadialProfile& profile, double j, double j0) {
  static const specfun::QuadratureRule coarse_rule = specfun::gauss_legendre(10, 0.0, 1.0);
  static const specfun::QuadratureRule fine_rule = specfun::gauss_legendre(14, 0.0, 1.0);
  const auto& breaks = profile.breakpoints();
  const double scale = 2.0 * kSqrtPi / std::abs(j0);
  auto f = [&](double r) { return biot_savart_radial(profile, r) * specfun::bessel_j(1, j * r) * r; };
  auto apply = [&](const specfun::QuadratureRule& rule, double a, double b) {
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) sum += rule.weights[q] * f(a + (b - a) * rule.nodes[q]);
    return (b - a) * sum;
  };
  for (int refine = 0; refine < 5; ++refine) {
    double coarse = 0.0, fine = 0.0;
    for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
      const double lo = breaks[s], hi = breaks[s + 1];
      // One panel per oscillation of J1(j r), at least 7 panels over [0, 1].
      const double per_unit = std::max(7.0, std::ceil(j / (2.0 * kPi)));
      const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) * per_unit)) << refine;
      const double width = (hi - lo) / static_cast<double>(panels);
      for (std::size_t p = 0; p < panels; ++p) {
        const double a = lo + width * p, b = p + 1 == panels ? hi : a + width;
        coarse += apply(coarse_rule, a, b);
        fine += apply(fine_rule, a, b);
      }
    }
    if (scale * std::abs(fine - coarse) <= 1e-9) return scale * fine;
  }
  throw NumericalError("project_initial: quadrature did not converge for j = " + std::to_string(j));
}

double moment_coefficient(const RadialProfile& profile, double j, double j0, bool& ok) {
  const auto& c = profile.coefficients();
  const auto m = specfun::bessel_moments(j, j0, 0.0, static_cast<int>(c.size()));
  ok = m.amplification <= kMaxAmplification;
  double sum = 0.0;
  // g(r) r = sum c_i r^{2i+2} / (2i+2)
  for (std::size_t i = 0; i < c.size(); ++i) sum += c[i] / (2.0 * i + 2.0) * m.s[i + 1];
  return 2.0 * kSqrtPi / std::abs(j0) * sum;
}

}  // namespace

std::vector<double> project_initial(const RadialProfile& profile, const specfun::BesselTable& table,
                                    ProjectionMethod method) {
  const std::size_t K = table.count();
  std::vector<double> a(K, 0.0);
  if (profile.is_zero()) return a;
  constexpr std::size_t kBlock = 256;
  parallel_for((K + kBlock - 1) / kBlock, [&](std::size_t b) {
    const std::size_t end = std::min(K, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      const double j = table.zeros()[i], j0 = table.j0_at_zeros()[i];
      bool ok = false;
      if (method == ProjectionMethod::automatic && profile.is_polynomial()) a[i] = moment_coefficient(profile, j, j0, ok);
      if (!ok) a[i] = quadrature_coefficient(profile, j, j0);
    }
  });
  return a;
}

DiskSpectralSolution::DiskSpectralSolution(RadialProfile profile,
                                           std::shared_ptr<const specfun::BesselTable> table, double nu,
                                           ProjectionMethod method)
    : profile_(std::move(profile)), table_(std::move(table)), nu_(nu) {
  if (!table_) throw std::invalid_argument("disk solution: missing Bessel table");
  coeffs_ = project_initial(profile_, *table_, method);
  initialize();
}

DiskSpectralSolution::DiskSpectralSolution(RadialProfile profile,
                                           std::shared_ptr<const specfun::BesselTable> table, double nu,
                                           std::vector<double> coefficients)
    : profile_(std::move(profile)), table_(std::move(table)), nu_(nu), coeffs_(std::move(coefficients)) {
  if (!table_) throw std::invalid_argument("disk solution: missing Bessel table");
  if (coeffs_.size() != table_->count())
    throw std::invalid_argument("disk solution: coefficient count must match the table");
  initialize();
}

void DiskSpectralSolution::initialize() {
  if (!(nu_ > 0.0) || !std::isfinite(nu_)) throw std::invalid_argument("disk solution: nu must be positive");
  const std::size_t K = coeffs_.size();
  inv_norm_.resize(K);
  coeff_bound_ = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    if (!std::isfinite(coeffs_[i])) throw NumericalError("disk solution: non-finite coefficient");
    inv_norm_[i] = 1.0 / (kSqrtPi * std::abs(table_->j0_at_zeros()[i]));
    coeff_bound_ = std::max(coeff_bound_, std::abs(coeffs_[i]) * table_->zeros()[i]);
  }
  mass_ = disk::total_mass(profile_);
  energy0_ = disk::initial_energy(profile_);
}

bool DiskSpectralSolution::has_mass() const {
  double scale = 1.0;
  for (double r : {0.0, 0.5, 1.0}) scale = std::max(scale, std::abs(profile_.value(r)));
  return std::abs(mass_) > 1e-12 * scale;
}

void DiskSpectralSolution::check_time(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("disk solution: time must be finite and >= 0");
}

std::size_t DiskSpectralSolution::active_modes(double t) const {
  check_time(t);
  if (t == 0.0) return mode_count();
  const double jmax = std::sqrt(kUnderflowExponent / (nu_ * t));
  const auto& z = table_->zeros();
  return static_cast<std::size_t>(std::upper_bound(z.begin(), z.end(), jmax) - z.begin());
}

double DiskSpectralSolution::gaussian_tail(double t, double power, std::size_t from) const {
  check_time(t);
  if (t == 0.0) return std::numeric_limits<double>::infinity();
  const std::size_t K = mode_count();
  const double s = nu_ * t;
  double sum = 0.0, prev = 0.0;
  constexpr std::size_t kMaxTerms = 20000000;
  for (std::size_t k = from + 1; k < from + kMaxTerms; ++k) {
    double jl, jh;
    if (k <= K) {
      jl = jh = table_->zero(k);
    } else {
      jl = specfun::zero_lower_bound(k);
      jh = specfun::zero_upper_bound(k);
    }
    const double exponent = s * jl * jl;
    const double term = std::pow(power >= 0.0 ? jh : jl, power) * std::exp(-exponent);
    sum += term;
    if (term == 0.0 && exponent > 700.0) return sum;
    // Past the Gaussian peak the term ratio only decreases, so a geometric
    // series bounds the rest once it is small.
    if (k > from + 1 && term < prev) {
      const double ratio = term / prev;
      const double rest = term * ratio / (1.0 - ratio);
      if (rest <= 1e-17 * sum || (sum == 0.0 && term == 0.0)) return sum + rest;
    }
    prev = term;
  }
  return std::numeric_limits<double>::infinity();
}

std::vector<double> DiskSpectralSolution::evolve(double t) const {
  check_time(t);
  std::vector<double> out(coeffs_.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double j = table_->zeros()[i];
    const double v = coeffs_[i] * std::exp(-nu_ * j * j * t);
    out[i] = std::abs(v) < 1e-300 ? 0.0 : v;
  }
  return out;
}

SeriesValue DiskSpectralSolution::velocity(double t, double r) const {
  check_time(t);
  if (!(r >= 0.0 && r <= 1.0)) throw std::domain_error("velocity: radius must lie in [0, 1]");
  if (t == 0.0) return {biot_savart_radial(profile_, r), 0.0, 0};
  const std::size_t n = active_modes(t);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double j = table_->zeros()[i];
    sum += coeffs_[i] * std::exp(-nu_ * j * j * t) * inv_norm_[i] * specfun::bessel_j(1, j * r);
  }
  const double tail = kVelocityEnvelope * coeff_bound_ * gaussian_tail(t, -0.5, n);
  if (!(tail <= kPointTolerance * std::max(1.0, std::abs(sum))))
    throw NumericalError("velocity: series tail " + std::to_string(tail) + " above tolerance at t = " +
                         std::to_string(t) + "; increase K");
  return {sum, tail, n};
}

SeriesValue DiskSpectralSolution::vorticity(double t, double r) const {
  check_time(t);
  if (!(r >= 0.0 && r <= 1.0)) throw std::domain_error("vorticity: radius must lie in [0, 1]");
  if (t == 0.0) {
    if (has_mass())
      throw InitialLayerError(
          "vorticity: initial-layer singularity, omega(0) has a boundary vortex sheet when the mass is nonzero");
    return {profile_.value(r), 0.0, 0};
  }
  const std::size_t n = active_modes(t);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double j = table_->zeros()[i];
    sum += coeffs_[i] * std::exp(-nu_ * j * j * t) * inv_norm_[i] * j * specfun::bessel_j(0, j * r);
  }
  const double tail = kVorticityEnvelope * coeff_bound_ * gaussian_tail(t, 0.5, n);
  if (!(tail <= kPointTolerance * std::max(1.0, std::abs(sum))))
    throw NumericalError("vorticity: series tail " + std::to_string(tail) + " above tolerance at t = " +
                         std::to_string(t) + "; increase K");
  return {sum, tail, n};
}

SeriesValue DiskSpectralSolution::boundary_vorticity(double t) const {
  check_time(t);
  if (t == 0.0) throw std::invalid_argument("boundary_vorticity: t must be positive");
  const std::size_t n = active_modes(t);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double j = table_->zeros()[i];
    const double sign = table_->j0_at_zeros()[i] < 0.0 ? -1.0 : 1.0;
    sum += coeffs_[i] * std::exp(-nu_ * j * j * t) * j * sign / kSqrtPi;
  }
  const double tail = coeff_bound_ / kSqrtPi * gaussian_tail(t, 0.0, n);
  if (!(tail <= kPointTolerance * std::max(1.0, std::abs(sum))))
    throw NumericalError("boundary_vorticity: tail not summable at t = " + std::to_string(t) + " for K = " +
                         std::to_string(mode_count()));
  return {sum, tail, n};
}

double DiskSpectralSolution::parseval_remainder() const {
  double partial = 0.0;
  for (double a : coeffs_) partial += a * a;
  return std::max(0.0, energy0_ - partial);
}

Bracket DiskSpectralSolution::energy(double t) const {
  check_time(t);
  if (t == 0.0) return {energy0_, energy0_};
  double sum = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const double j = table_->zeros()[i];
    sum += coeffs_[i] * coeffs_[i] * std::exp(-2.0 * nu_ * j * j * t);
  }
  const double tail = std::min(parseval_remainder(),
                               coeff_bound_ * coeff_bound_ * gaussian_tail(2.0 * t, -2.0, mode_count()));
  return {sum, sum + tail};
}

Bracket DiskSpectralSolution::error_energy(double t) const {
  check_time(t);
  if (t == 0.0) return {0.0, 0.0};
  double sum = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const double j = table_->zeros()[i];
    const double gap = -std::expm1(-nu_ * j * j * t);
    sum += coeffs_[i] * coeffs_[i] * gap * gap;
  }
  // The unresolved modes carry ||u0||^2 - sum a_k^2 in total, each with a
  // factor (1 - e_k)^2 between that of mode K+1 and 1.
  const double rest = parseval_remainder();
  const double jl = specfun::zero_lower_bound(mode_count() + 1);
  const double gap = -std::expm1(-nu_ * jl * jl * t);
  return {sum + gap * gap * rest, sum + rest};
}

VorticityBlock DiskSpectralSolution::vorticity_block(const std::vector<double>& times,
                                                     const std::vector<double>& radii) const {
  const std::size_t M = times.size(), R = radii.size();
  VorticityBlock block;
  block.time_count = M;
  block.radius_count = R;
  block.values.assign(M * R, 0.0);
  block.tail_bounds.assign(M, 0.0);
  if (M == 0 || R == 0) return block;
  std::vector<std::size_t> active(M);
  std::size_t kmax = 0;
  for (std::size_t m = 0; m < M; ++m) {
    if (!(times[m] > 0.0)) throw std::invalid_argument("vorticity_block: times must be positive");
    active[m] = active_modes(times[m]);
    kmax = std::max(kmax, active[m]);
    block.tail_bounds[m] = kVorticityEnvelope * coeff_bound_ * gaussian_tail(times[m], 0.5, active[m]);
  }
  for (double r : radii)
    if (!(r >= 0.0 && r <= 1.0)) throw std::domain_error("vorticity_block: radius must lie in [0, 1]");

  // Modes are processed in fixed chunks; within a radius the summation order
  // is the mode order, independent of the thread layout.
  constexpr std::size_t kChunk = 8192;
  constexpr std::size_t kRadiusBlock = 8;
  std::vector<double> acc(R * M, 0.0);
  std::vector<double> weights(kChunk * M);
  for (std::size_t start = 0; start < kmax; start += kChunk) {
    const std::size_t end = std::min(kmax, start + kChunk);
    for (std::size_t i = start; i < end; ++i) {
      const double j = table_->zeros()[i];
      const double base = coeffs_[i] * inv_norm_[i] * j;
      for (std::size_t m = 0; m < M; ++m)
        weights[(i - start) * M + m] = i < active[m] ? base * std::exp(-nu_ * j * j * times[m]) : 0.0;
    }
    parallel_for((R + kRadiusBlock - 1) / kRadiusBlock, [&](std::size_t b) {
      const std::size_t rend = std::min(R, (b + 1) * kRadiusBlock);
      for (std::size_t ri = b * kRadiusBlock; ri < rend; ++ri) {
        double* out = &acc[ri * M];
        const double r = radii[ri];
        for (std::size_t i = start; i < end; ++i) {
          const double bessel = specfun::bessel_j(0, table_->zeros()[i] * r);
          const double* w = &weights[(i - start) * M];
          for (std::size_t m = 0; m < M; ++m) out[m] += w[m] * bessel;
        }
      }
    });
  }
  for (std::size_t ri = 0; ri < R; ++ri)
    for (std::size_t m = 0; m < M; ++m) block.values[m * R + ri] = acc[ri * M + m];
  return block;
}

EulerDiskSolution::EulerDiskSolution(RadialProfile profile)
    : profile_(std::move(profile)),
      mass_(disk::total_mass(profile_)),
      boundary_speed_(biot_savart_radial(profile_, 1.0)) {}

double EulerDiskSolution::velocity(double t, double r) const {
  if (!(t >= 0.0)) throw std::invalid_argument("euler velocity: time must be >= 0");
  return biot_savart_radial(profile_, r);
}

double EulerDiskSolution::vorticity(double t, double r) const {
  if (!(t >= 0.0)) throw std::invalid_argument("euler vorticity: time must be >= 0");
  return profile_.value(r);
}

double EulerDiskSolution::mass(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("euler mass: time must be >= 0");
  return mass_;
}

EulerDiskSolution euler_solution(const RadialProfile& profile) { return EulerDiskSolution(profile); }

void write_coefficient_table(std::ostream& out, const DiskSpectralSolution& solution) {
  const auto old = out.precision(17);
  out << "k,j_1k,a_k,sign\n";
  for (std::size_t k = 1; k <= solution.mode_count(); ++k)
    out << k << ',' << solution.table().zero(k) << ',' << solution.coefficients()[k - 1] << ','
        << solution.table().sign(k) << '\n';
  out.precision(old);
}

}  // namespace vvlab::disk
