#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "vvlab/disk_flow.hpp"

namespace vvlab::disk {
namespace {

constexpr double kPi = std::numbers::pi;

void check_radius(double r, const char* what) {
  if (!(r >= 0.0 && r <= 1.0))
    throw std::domain_error(std::string(what) + ": radius must lie in [0, 1]");
}

}  // namespace

RadialProfile RadialProfile::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  for (double c : coefficients)
    if (!std::isfinite(c)) throw std::invalid_argument("profile: non-finite coefficient");
  RadialProfile p;
  p.polynomial_ = true;
  p.coeffs_ = std::move(coefficients);
  p.breaks_ = {0.0, 1.0};
  return p;
}

RadialProfile RadialProfile::constant(double value) { return polynomial({value}); }

RadialProfile RadialProfile::table(std::vector<double> radii, std::vector<double> values) {
  const std::size_t n = radii.size();
  if (n < 2 || values.size() != n)
    throw std::invalid_argument("profile table: need at least two (r, omega) rows");
  if (radii.front() != 0.0 || radii.back() != 1.0)
    throw std::invalid_argument("profile table: radii must start at 0 and end at 1");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(values[i]) || !std::isfinite(radii[i]))
      throw std::invalid_argument("profile table: non-finite entry");
    if (i > 0 && !(radii[i] > radii[i - 1]))
      throw std::invalid_argument("profile table: radii must increase strictly");
  }
  RadialProfile p;
  p.polynomial_ = false;
  p.knots_ = std::move(radii);
  p.values_ = std::move(values);

  // Tridiagonal system for the second derivatives: clamped slope 0 at the
  // center, natural end at the wall.
  const std::size_t last = n - 1;
  std::vector<double> lower(n, 0.0), diag(n, 1.0), upper(n, 0.0), rhs(n, 0.0);
  const auto& x = p.knots_;
  const auto& y = p.values_;
  {
    const double h = x[1] - x[0];
    diag[0] = 2.0 * h;
    upper[0] = h;
    rhs[0] = 6.0 * (y[1] - y[0]) / h;
  }
  for (std::size_t i = 1; i < last; ++i) {
    const double hl = x[i] - x[i - 1], hr = x[i + 1] - x[i];
    lower[i] = hl;
    diag[i] = 2.0 * (hl + hr);
    upper[i] = hr;
    rhs[i] = 6.0 * ((y[i + 1] - y[i]) / hr - (y[i] - y[i - 1]) / hl);
  }
  diag[last] = 1.0;
  rhs[last] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  p.second_.assign(n, 0.0);
  p.second_[last] = rhs[last] / diag[last];
  for (std::size_t i = last; i-- > 0;) p.second_[i] = (rhs[i] - upper[i] * p.second_[i + 1]) / diag[i];

  p.cumulative_.assign(n, 0.0);
  for (std::size_t i = 0; i < last; ++i)
    p.cumulative_[i + 1] = p.cumulative_[i] + p.piece_integral(i, x[i + 1]);
  p.breaks_ = p.knots_;
  return p;
}

bool RadialProfile::is_zero() const {
  const auto& v = polynomial_ ? coeffs_ : values_;
  return std::all_of(v.begin(), v.end(), [](double c) { return c == 0.0; });
}

std::size_t RadialProfile::segment(double r) const {
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), r);
  const std::size_t i = static_cast<std::size_t>(it - knots_.begin());
  return std::min(i == 0 ? 0 : i - 1, knots_.size() - 2);
}

double RadialProfile::value(double r) const {
  check_radius(r, "profile value");
  if (polynomial_) {
    double sum = 0.0;
    const double r2 = r * r;
    for (std::size_t i = coeffs_.size(); i-- > 0;) sum = sum * r2 + coeffs_[i];
    return sum;
  }
  const std::size_t i = segment(r);
  const double h = knots_[i + 1] - knots_[i];
  const double a = (knots_[i + 1] - r) / h, b = (r - knots_[i]) / h;
  return a * values_[i] + b * values_[i + 1] +
         ((a * a * a - a) * second_[i] + (b * b * b - b) * second_[i + 1]) * h * h / 6.0;
}

double RadialProfile::laplacian(double r) const {
  check_radius(r, "profile laplacian");
  if (polynomial_) {
    double sum = 0.0;
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
      sum += coeffs_[i] * 4.0 * static_cast<double>(i * i) * std::pow(r, 2.0 * i - 2.0);
    return sum;
  }
  const std::size_t i = segment(r);
  const double h = knots_[i + 1] - knots_[i];
  const double a = (knots_[i + 1] - r) / h, b = (r - knots_[i]) / h;
  const double d2 = a * second_[i] + b * second_[i + 1];
  if (r == 0.0) return 2.0 * d2;
  const double d1 = (values_[i + 1] - values_[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * second_[i] +
                    (3.0 * b * b - 1.0) / 6.0 * h * second_[i + 1];
  return d2 + d1 / r;
}

double RadialProfile::piece_integral(std::size_t seg, double r) const {
  // The integrand is a quartic in rho, so three Gauss points are exact.
  static const double g[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  static const double w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const double lo = knots_[seg];
  const double half = 0.5 * (r - lo), mid = 0.5 * (r + lo);
  double sum = 0.0;
  for (int q = 0; q < 3; ++q) {
    const double rho = mid + half * g[q];
    sum += w[q] * value(rho) * rho;
  }
  return half * sum;
}

double RadialProfile::integral(double r) const {
  check_radius(r, "profile integral");
  if (polynomial_) {
    double sum = 0.0;
    const double r2 = r * r;
    for (std::size_t i = coeffs_.size(); i-- > 0;) sum = sum * r2 + coeffs_[i] / (2.0 * i + 2.0);
    return sum * r2;
  }
  const std::size_t i = segment(r);
  return cumulative_[i] + piece_integral(i, r);
}

std::string RadialProfile::describe() const {
  std::ostringstream out;
  out.precision(17);
  if (polynomial_) {
    out << "polynomial:";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out << (i ? "," : "") << coeffs_[i];
  } else {
    out << "table:" << knots_.size() << " knots";
  }
  return out.str();
}

double biot_savart_radial(const RadialProfile& profile, double r) {
  check_radius(r, "biot_savart_radial");
  if (r == 0.0) return 0.0;
  if (profile.is_polynomial()) {
    const auto& c = profile.coefficients();
    double sum = 0.0;
    const double r2 = r * r;
    for (std::size_t i = c.size(); i-- > 0;) sum = sum * r2 + c[i] / (2.0 * i + 2.0);
    return sum * r;
  }
  return profile.integral(r) / r;
}

double total_mass(const RadialProfile& profile) { return 2.0 * kPi * profile.integral(1.0); }

double initial_energy(const RadialProfile& profile) {
  if (profile.is_polynomial()) {
    // g = sum c_i r^{2i+1}/(2i+2), so int g^2 r dr is a double sum.
    const auto& c = profile.coefficients();
    double sum = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t l = 0; l < c.size(); ++l)
        sum += c[i] * c[l] / ((2.0 * i + 2.0) * (2.0 * l + 2.0) * (2.0 * i + 2.0 * l + 4.0));
    return 2.0 * kPi * sum;
  }
  const auto& b = profile.breakpoints();
  double sum = 0.0;
  for (std::size_t s = 0; s + 1 < b.size(); ++s) {
    const auto rule = specfun::gauss_legendre(20, b[s], b[s + 1]);
    sum += rule.integrate([&](double r) {
      const double g = biot_savart_radial(profile, r);
      return g * g * r;
    });
  }
  return 2.0 * kPi * sum;
}

}  // namespace vvlab::disk
