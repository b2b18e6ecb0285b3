#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "vvlab/disk_flow.hpp"
#include "vvlab/layer_spec.hpp"
#include "vvlab/shear_flow.hpp"
#include "vvlab/specfun.hpp"

namespace vvlab::diag {

using specfun::Estimate;

// Scalar test function with an analytic gradient. Disk kinds are radial,
// the channel kind depends on the wall distance z only.
class TestFunction {
 public:
  enum class Kind { radial_polynomial, bessel_mode, channel };

  // f(r) = sum_i b_i r^{2i}
  static TestFunction radial_polynomial(std::vector<double> coefficients);
  // f(r) = J0(j_{1,1} r)
  static TestFunction bessel_mode();
  // f(z) = (sum_i p_i z^i) exp(-z / scale); scale = inf gives a polynomial.
  static TestFunction channel(std::vector<double> coefficients, double scale);

  Kind kind() const { return kind_; }
  bool on_disk() const { return kind_ != Kind::channel; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  double scale() const { return scale_; }

  double value(double x) const;
  double gradient(double x) const;
  std::string describe() const;

 private:
  TestFunction() = default;
  Kind kind_ = Kind::radial_polynomial;
  std::vector<double> coeffs_;
  double scale_ = 0.0;
};

// The fixed disk suite {1, r^2, r^4, 1 - r^2, J0(j_{1,1} r)}.
std::vector<TestFunction> disk_test_suite();

// Azimuthal test field v = g(r) e_theta, held as coefficients in the disk
// eigenbasis plus its full norm, so the unresolved part is ||v||^2 - sum c_k^2.
class AzimuthalTestField {
 public:
  // v is the Biot-Savart field of the given vorticity profile.
  static AzimuthalTestField from_vorticity(const disk::RadialProfile& generator,
                                           const specfun::BesselTable& table);
  static AzimuthalTestField from_coefficients(std::vector<double> coefficients, double norm_sq);

  const std::vector<double>& coefficients() const { return coeffs_; }
  double norm_sq() const { return norm_sq_; }
  double tail_norm() const;

 private:
  std::vector<double> coeffs_;
  double norm_sq_ = 0.0;
};

// Modes needed so that every series evaluation down to time t_min is
// certified: nu j_{K+1}^2 t_min >= 45.
std::size_t modes_for_time(double nu, double t_min);
// Modes the strip diagnostics need for a strip of the given width.
std::size_t layer_modes_required(double nu, double width, double T);
std::size_t kato_modes_required(double nu, double kato_constant, double T);

// nu int_0^T ||omega||^2_{L^2(strip of width c nu)} dt
Estimate kato_layer_enstrophy(const disk::DiskSpectralSolution& solution, double T, const LayerSpec& layer);
Estimate kato_layer_enstrophy(const shear::ShearSolution& solution, double T, const LayerSpec& layer);

// (int_0^T (int_{strip of width delta} |omega|)^2 dt)^{1/2}
Estimate layer_l1_mass(const disk::DiskSpectralSolution& solution, double T, double delta);
Estimate layer_l1_mass(const shear::ShearSolution& solution, double T, double delta);

struct SheetPairing {
  double lhs = 0.0;            // (omega(t), f)
  double rhs = 0.0;            // (omega-bar(t), f) - int_Gamma (u-bar . tau) f
  double boundary_term = 0.0;  // int_Gamma (u-bar . tau) f
  double gap = 0.0;
  double error = 0.0;
};
SheetPairing sheet_pairing(const disk::DiskSpectralSolution& ns, const disk::EulerDiskSolution& euler,
                           const TestFunction& f, double t);
SheetPairing sheet_pairing(const shear::ShearSolution& ns, const TestFunction& f, double t);

// nu int_0^T int_Gamma omega phi. The disk vorticity is radial, so only the
// angular mean of phi matters.
Estimate boundary_flux(const disk::DiskSpectralSolution& solution, double T, double phi);
Estimate boundary_flux(const disk::DiskSpectralSolution& solution, double T,
                       const std::function<double(double)>& phi_of_theta);
// phi = u-bar . tau
Estimate boundary_flux_tangential(const disk::DiskSpectralSolution& ns, const disk::EulerDiskSolution& euler,
                                  double T);
Estimate boundary_flux(const shear::ShearSolution& solution, double T, double phi);

struct MassBudget {
  double t = 0.0;
  double m = 0.0;               // initial mass, conserved by Euler
  double mass_outside = 0.0;    // M of the complement of the delta strip
  double mass_inside = 0.0;     // M of the delta strip
  double cutoff_pairing = 0.0;  // (omega, 1 - phi_delta)
  double cutoff_gap = 0.0;      // |(omega, 1 - phi_delta) - m|
  double delta = 0.0;
  double delta_star = 0.0;
  double f_nu = 0.0;            // supplied rate value F(nu), NaN if unknown
  double bound_scale = 0.0;     // delta + (delta - delta_star)^{-1/2} F(nu)
  double error = 0.0;
};
MassBudget mass_budget(const disk::DiskSpectralSolution& ns, const disk::EulerDiskSolution& euler,
                       const LayerSpec& layer, double t, double f_nu);

// ||omega(t)||_{L^p}; p = inf is a max over a 4096-point grid, which only
// bounds the essential sup from below.
std::vector<Estimate> lp_norm_scan(const disk::DiskSpectralSolution& solution, double t,
                                   const std::vector<double>& p_list);
std::vector<Estimate> lp_norm_scan(const shear::ShearSolution& solution, double t,
                                   const std::vector<double>& p_list);

struct TraceRatio {
  double ratio = 0.0;
  double trace_norm = 0.0;     // ||f||_{L^p(Gamma)}
  double lebesgue_norm = 0.0;  // ||f||_{L^{(p-1)q}}
  double sobolev_norm = 0.0;   // ||f||_{W^{1,q'}}
};
// Trace inequality ratio on the unit disk; q = 1 means q' = inf.
TraceRatio trace_ratio(const TestFunction& f, double p, double q);

// |(u(t) - u-bar(t), v)| / ||v||
Estimate weak_velocity_pairing(const disk::DiskSpectralSolution& ns, const disk::EulerDiskSolution& euler,
                               const AzimuthalTestField& v, double t);

}  // namespace vvlab::diag
