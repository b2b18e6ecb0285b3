#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "vvlab/specfun.hpp"

namespace vvlab::disk {

// Radially symmetric initial vorticity on the unit disk: either a polynomial
// in r^2 or a sampled table joined by cubic pieces.
class RadialProfile {
 public:
  // omega0(r) = sum_i c_i r^{2i}
  static RadialProfile polynomial(std::vector<double> coefficients);
  static RadialProfile constant(double value);
  // Knots must start at 0, end at 1 and increase strictly. The cubic spline
  // has zero slope at the center and zero curvature at the wall.
  static RadialProfile table(std::vector<double> radii, std::vector<double> values);

  bool is_polynomial() const { return polynomial_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  bool is_zero() const;

  double value(double r) const;
  // Radial Laplacian omega'' + omega'/r.
  double laplacian(double r) const;
  // int_0^r omega0(rho) rho drho
  double integral(double r) const;
  // Points where the profile may be non-smooth; always includes 0 and 1.
  const std::vector<double>& breakpoints() const { return breaks_; }
  std::string describe() const;

 private:
  RadialProfile() = default;
  std::size_t segment(double r) const;
  double piece_integral(std::size_t seg, double r) const;

  bool polynomial_ = true;
  std::vector<double> coeffs_;
  std::vector<double> knots_, values_, second_, cumulative_;
  std::vector<double> breaks_;
};

// Azimuthal speed (1/r) int_0^r omega0 rho drho, zero at the center.
double biot_savart_radial(const RadialProfile& profile, double r);
double total_mass(const RadialProfile& profile);
// ||u0||^2 = 2 pi int_0^1 g(r)^2 r dr with g the Biot-Savart speed.
double initial_energy(const RadialProfile& profile);

enum class ProjectionMethod { automatic, quadrature };

// Coefficients a_k of u0 in the orthonormal basis
// u_k = J1(j_k r) / (sqrt(pi) |J0(j_k)|) e_theta. Polynomial profiles use
// closed-form Bessel moments unless the moment recurrence amplifies
// rounding; everything else goes through panel quadrature.
std::vector<double> project_initial(const RadialProfile& profile, const specfun::BesselTable& table,
                                    ProjectionMethod method = ProjectionMethod::automatic);

struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;
  std::size_t terms = 0;
};

// Lower and upper bound for a quantity whose series remainder is bracketed.
struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
};

struct VorticityBlock {
  std::size_t time_count = 0;
  std::size_t radius_count = 0;
  std::vector<double> values;       // values[m * radius_count + i] = omega(t_m, r_i)
  std::vector<double> tail_bounds;  // per time, uniform in r
  double at(std::size_t m, std::size_t i) const { return values[m * radius_count + i]; }
};

class DiskSpectralSolution {
 public:
  DiskSpectralSolution(RadialProfile profile, std::shared_ptr<const specfun::BesselTable> table,
                       double nu, ProjectionMethod method = ProjectionMethod::automatic);
  // Explicit coefficients, for modal experiments.
  DiskSpectralSolution(RadialProfile profile, std::shared_ptr<const specfun::BesselTable> table,
                       double nu, std::vector<double> coefficients);

  const specfun::BesselTable& table() const { return *table_; }
  const std::shared_ptr<const specfun::BesselTable>& shared_table() const { return table_; }
  const RadialProfile& profile() const { return profile_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  std::size_t mode_count() const { return coeffs_.size(); }
  double nu() const { return nu_; }
  double total_mass() const { return mass_; }
  bool has_mass() const;
  double initial_energy() const { return energy0_; }
  // A with |a_k| <= A / j_k over the computed modes; used for tails.
  double coefficient_bound() const { return coeff_bound_; }
  // omega_k(1) / j_k is sign_k / sqrt(pi); the boundary value of mode k.
  double mode_norm(std::size_t k) const { return inv_norm_[k - 1]; }

  std::vector<double> evolve(double t) const;

  SeriesValue velocity(double t, double r) const;
  SeriesValue vorticity(double t, double r) const;
  SeriesValue boundary_vorticity(double t) const;

  // ||u(t)||^2 with its remainder bracketed.
  Bracket energy(double t) const;
  // ||u(t) - u0||^2 from the Parseval identity.
  Bracket error_energy(double t) const;
  // ||u0||^2 - sum_{k<=K} a_k^2, clamped at zero.
  double parseval_remainder() const;

  // Modes with nu j^2 t below the underflow cut; the rest are tail.
  std::size_t active_modes(double t) const;
  // Upper bound of sum_{k>from} j_k^power exp(-nu j_k^2 t), using table
  // zeros up to K and classical bounds beyond. Infinite when not summable.
  double gaussian_tail(double t, double power, std::size_t from) const;

  VorticityBlock vorticity_block(const std::vector<double>& times,
                                 const std::vector<double>& radii) const;

 private:
  void initialize();
  void check_time(double t) const;

  RadialProfile profile_;
  std::shared_ptr<const specfun::BesselTable> table_;
  double nu_;
  std::vector<double> coeffs_;
  std::vector<double> inv_norm_;  // 1 / (sqrt(pi) |J0(j_k)|)
  double mass_ = 0.0;
  double energy0_ = 0.0;
  double coeff_bound_ = 0.0;
};

// The stationary Euler state u-bar = u0.
class EulerDiskSolution {
 public:
  explicit EulerDiskSolution(RadialProfile profile);
  const RadialProfile& profile() const { return profile_; }
  double velocity(double t, double r) const;
  double vorticity(double t, double r) const;
  double mass(double t) const;
  // Tangential velocity on the wall, u-bar . tau at r = 1.
  double boundary_speed() const { return boundary_speed_; }

 private:
  RadialProfile profile_;
  double mass_;
  double boundary_speed_;
};

EulerDiskSolution euler_solution(const RadialProfile& profile);

// CSV with columns k, j_1k, a_k, sign.
void write_coefficient_table(std::ostream& out, const DiskSpectralSolution& solution);

}  // namespace vvlab::disk
