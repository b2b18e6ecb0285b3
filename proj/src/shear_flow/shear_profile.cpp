#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "vvlab/shear_flow.hpp"

namespace vvlab::shear {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_depth(double z) {
  if (!(z >= 0.0) || !std::isfinite(z)) throw std::domain_error("shear profile: depth must be finite and >= 0");
}

}  // namespace

ShearProfile ShearProfile::constant(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("shear profile: non-finite constant");
  ShearProfile p;
  p.kind_ = Kind::constant;
  p.params_ = {value};
  p.bound_ = std::abs(value);
  p.feature_ = kInf;
  p.allowance_ = 0.0;
  p.measure_bounds();
  return p;
}

ShearProfile ShearProfile::exp_decay(double amplitude, double rate) {
  if (!std::isfinite(amplitude) || !(rate > 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("shear profile: exp_decay needs finite amplitude and positive rate");
  ShearProfile p;
  p.kind_ = Kind::exp_decay;
  p.params_ = {amplitude, rate};
  p.bound_ = std::abs(amplitude);
  p.rate_ = rate;
  p.feature_ = 1.0 / rate;
  p.allowance_ = 40.0 / rate;
  p.measure_bounds();
  return p;
}

ShearProfile ShearProfile::poly_gauss(std::vector<double> coefficients, double width) {
  if (coefficients.empty() || !(width > 0.0) || !std::isfinite(width))
    throw std::invalid_argument("shear profile: poly_gauss needs coefficients and a positive width");
  for (double c : coefficients)
    if (!std::isfinite(c)) throw std::invalid_argument("shear profile: non-finite coefficient");
  ShearProfile p;
  p.kind_ = Kind::poly_gauss;
  p.params_ = std::move(coefficients);
  p.width_ = width;
  p.feature_ = width / (1.0 + static_cast<double>(p.params_.size()));
  p.allowance_ = (7.0 + std::sqrt(static_cast<double>(p.params_.size()))) * width;
  p.measure_bounds();
  p.bound_ = p.sup_;
  return p;
}

ShearProfile ShearProfile::table(std::vector<double> z, std::vector<double> values, double bound,
                                 double decay_rate) {
  const std::size_t n = z.size();
  if (n < 2 || values.size() != n) throw std::invalid_argument("shear profile table: need at least two rows");
  if (z.front() != 0.0) throw std::invalid_argument("shear profile table: depths must start at 0");
  if (!(bound >= 0.0) || !(decay_rate >= 0.0))
    throw std::invalid_argument("shear profile table: decay bound and rate must be >= 0");
  double spacing = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(z[i]) || !std::isfinite(values[i]))
      throw std::invalid_argument("shear profile table: non-finite entry");
    if (i > 0) {
      if (!(z[i] > z[i - 1])) throw std::invalid_argument("shear profile table: depths must increase strictly");
      spacing = std::min(spacing, z[i] - z[i - 1]);
    }
    if (std::abs(values[i]) > bound * std::exp(-decay_rate * z[i]) * (1.0 + 1e-12))
      throw std::invalid_argument("shear profile table: row " + std::to_string(i) +
                                  " violates the declared decay bound");
  }
  ShearProfile p;
  p.kind_ = Kind::table;
  p.knots_ = std::move(z);
  p.values_ = std::move(values);
  p.bound_ = bound;
  p.rate_ = decay_rate;
  p.feature_ = spacing;
  p.allowance_ = p.knots_.back() + (decay_rate > 0.0 ? 40.0 / decay_rate : 0.0);

  // Natural start; the end slope matches the exponential continuation.
  const auto& x = p.knots_;
  const auto& y = p.values_;
  const std::size_t last = n - 1;
  const double end_slope = -decay_rate * y[last];
  std::vector<double> lower(n, 0.0), diag(n, 1.0), upper(n, 0.0), rhs(n, 0.0);
  for (std::size_t i = 1; i < last; ++i) {
    const double hl = x[i] - x[i - 1], hr = x[i + 1] - x[i];
    lower[i] = hl;
    diag[i] = 2.0 * (hl + hr);
    upper[i] = hr;
    rhs[i] = 6.0 * ((y[i + 1] - y[i]) / hr - (y[i] - y[i - 1]) / hl);
  }
  {
    const double h = x[last] - x[last - 1];
    lower[last] = h;
    diag[last] = 2.0 * h;
    rhs[last] = 6.0 * (end_slope - (y[last] - y[last - 1]) / h);
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  p.second_.assign(n, 0.0);
  p.second_[last] = rhs[last] / diag[last];
  for (std::size_t i = last; i-- > 0;) p.second_[i] = (rhs[i] - upper[i] * p.second_[i + 1]) / diag[i];
  p.measure_bounds();
  return p;
}

void ShearProfile::measure_bounds() {
  // Dense sampling; exact for the constant and exponential shapes.
  switch (kind_) {
    case Kind::constant:
      sup_ = std::abs(params_[0]);
      lipschitz_ = 0.0;
      return;
    case Kind::exp_decay:
      sup_ = std::abs(params_[0]);
      lipschitz_ = std::abs(params_[0]) * params_[1];
      return;
    default:
      break;
  }
  const double span = allowance_ > 0.0 ? allowance_ : 1.0;
  constexpr int kSamples = 20000;
  sup_ = 0.0;
  lipschitz_ = 0.0;
  for (int i = 0; i <= kSamples; ++i) {
    const double z = span * i / kSamples;
    sup_ = std::max(sup_, std::abs(value(z)));
    lipschitz_ = std::max(lipschitz_, std::abs(derivative(z)));
  }
}

double ShearProfile::value(double z) const {
  check_depth(z);
  switch (kind_) {
    case Kind::constant:
      return params_[0];
    case Kind::exp_decay:
      return params_[0] * std::exp(-params_[1] * z);
    case Kind::poly_gauss: {
      double poly = 0.0;
      for (std::size_t i = params_.size(); i-- > 0;) poly = poly * z + params_[i];
      const double s = z / width_;
      return poly * std::exp(-s * s);
    }
    case Kind::table:
      break;
  }
  const std::size_t last = knots_.size() - 1;
  if (z >= knots_[last]) return values_[last] * std::exp(-rate_ * (z - knots_[last]));
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), z);
  const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  const double h = knots_[i + 1] - knots_[i];
  const double a = (knots_[i + 1] - z) / h, b = (z - knots_[i]) / h;
  return a * values_[i] + b * values_[i + 1] +
         ((a * a * a - a) * second_[i] + (b * b * b - b) * second_[i + 1]) * h * h / 6.0;
}

double ShearProfile::derivative(double z) const {
  check_depth(z);
  switch (kind_) {
    case Kind::constant:
      return 0.0;
    case Kind::exp_decay:
      return -params_[0] * params_[1] * std::exp(-params_[1] * z);
    case Kind::poly_gauss: {
      double poly = 0.0, dpoly = 0.0;
      for (std::size_t i = params_.size(); i-- > 0;) {
        dpoly = dpoly * z + poly;
        poly = poly * z + params_[i];
      }
      const double s = z / width_;
      return (dpoly - 2.0 * z / (width_ * width_) * poly) * std::exp(-s * s);
    }
    case Kind::table:
      break;
  }
  const std::size_t last = knots_.size() - 1;
  if (z >= knots_[last]) return -rate_ * values_[last] * std::exp(-rate_ * (z - knots_[last]));
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), z);
  const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  const double h = knots_[i + 1] - knots_[i];
  const double a = (knots_[i + 1] - z) / h, b = (z - knots_[i]) / h;
  return (values_[i + 1] - values_[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * second_[i] +
         (3.0 * b * b - 1.0) / 6.0 * h * second_[i + 1];
}

std::string ShearProfile::describe() const {
  std::ostringstream out;
  out.precision(17);
  switch (kind_) {
    case Kind::constant:
      out << "constant:" << params_[0];
      break;
    case Kind::exp_decay:
      out << "exp_decay:" << params_[0] << ',' << params_[1];
      break;
    case Kind::poly_gauss:
      out << "poly_gauss:";
      for (std::size_t i = 0; i < params_.size(); ++i) out << (i ? "," : "") << params_[i];
      out << ';' << width_;
      break;
    case Kind::table:
      out << "table:" << knots_.size() << " knots";
      break;
  }
  return out.str();
}

}  // namespace vvlab::shear
