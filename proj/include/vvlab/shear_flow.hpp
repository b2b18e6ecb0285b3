#pragma once

#include <string>
#include <vector>

#include "vvlab/specfun.hpp"

namespace vvlab::shear {

// Initial shear profile phi0(z), z >= 0, with the bounds the heat-kernel
// truncation relies on.
class ShearProfile {
 public:
  static ShearProfile constant(double value);
  // amplitude * exp(-rate z)
  static ShearProfile exp_decay(double amplitude, double rate);
  // (sum_i p_i z^i) exp(-(z / width)^2)
  static ShearProfile poly_gauss(std::vector<double> coefficients, double width);
  // Cubic spline through (z_i, phi_i) with z_0 = 0. Declared bound
  // |phi0(z)| <= bound exp(-decay_rate z); decay_rate 0 means |phi0| <= bound.
  // Beyond the last knot the profile continues as phi_N exp(-decay_rate (z - z_N)).
  static ShearProfile table(std::vector<double> z, std::vector<double> values, double bound,
                            double decay_rate);

  double value(double z) const;
  double derivative(double z) const;
  double value_at_0() const { return value(0.0); }
  double sup_bound() const { return sup_; }
  double lipschitz() const { return lipschitz_; }
  double decay_bound() const { return bound_; }
  double decay_rate() const { return rate_; }
  // Length over which the profile changes appreciably; infinite if flat.
  double feature_length() const { return feature_; }
  // Depth beyond which phi0 is negligible or constant.
  double decay_allowance() const { return allowance_; }
  const std::vector<double>& breakpoints() const { return knots_; }
  bool is_zero() const { return sup_ == 0.0; }
  std::string describe() const;

 private:
  enum class Kind { constant, exp_decay, poly_gauss, table };
  ShearProfile() = default;
  void measure_bounds();

  Kind kind_ = Kind::constant;
  std::vector<double> params_;
  double width_ = 1.0;
  std::vector<double> knots_, values_, second_;
  double bound_ = 0.0, rate_ = 0.0;
  double sup_ = 0.0, lipschitz_ = 0.0;
  double feature_ = 0.0, allowance_ = 0.0;
};

class ShearSolution {
 public:
  // half_width L: the channel is [-L, L] periodic in x1.
  ShearSolution(ShearProfile profile, double nu, double half_width = 0.5);

  const ShearProfile& profile() const { return profile_; }
  double nu() const { return nu_; }
  double half_width() const { return half_width_; }

  double phi(double t, double z) const;
  double phi_z(double t, double z) const;
  double boundary_gradient(double t) const;
  // -2L phi0(0) nu int_0^T boundary_gradient dt
  double boundary_integral(double T) const;
  // nu int_0^T phi_z(t, 0) dt
  double wall_gradient_integral(double T) const;
  double ns_velocity(double t, double z) const;
  double euler_velocity(double z) const { return profile_.value(z); }

  // ||u(t) - u-bar||^2_{L^2} = 2L int_0^inf (phi - phi0)^2 dz
  specfun::Estimate l2_error_sq(double t) const;
  // Depth beyond which phi(t, .) - phi0 is negligible.
  double truncation_depth(double t) const;

 private:
  double kernel_integral(double t, double z, bool derivative) const;

  ShearProfile profile_;
  double nu_;
  double half_width_;
};

}  // namespace vvlab::shear
