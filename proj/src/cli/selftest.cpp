#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "vvlab/cli.hpp"
#include "vvlab/diagnostics.hpp"
#include "vvlab/vorticity_algebra.hpp"

namespace vvlab::cli {
namespace {

struct Check {
  const char* name;
  std::function<bool()> run;
};

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::vector<Check> checks() {
  using namespace vvlab;
  const auto zero_disk = disk::RadialProfile::constant(0.0);
  const auto two = disk::RadialProfile::constant(2.0);
  const auto table = specfun::shared_j1_zeros(200);
  return {
      {"J0(0) = 1", [] { return specfun::bessel_j(0, 0.0) == 1.0; }},
      {"J1(0) = 0", [] { return specfun::bessel_j(1, 0.0) == 0.0; }},
      {"erf(0) = 0", [] { return specfun::erf(0.0) == 0.0; }},
      {"erf(6) = 1", [] { return near(specfun::erf(6.0), 1.0, 1e-12); }},
      {"one-point Gauss integrates x", [] {
         return near(specfun::gauss_legendre(1, 0.0, 1.0).integrate([](double x) { return x; }), 0.5, 1e-15);
       }},
      {"two-point Gauss integrates x^3", [] {
         return near(specfun::gauss_legendre(2, 0.0, 1.0).integrate([](double x) { return x * x * x; }), 0.25,
                     1e-15);
       }},
      {"cutoff is 1 at the wall, 0 at delta, 1/2 midway", [] {
         LayerSpec l{0.2, 0.1, 1.0};
         return specfun::smooth_cutoff(l, 0.0) == 1.0 && specfun::smooth_cutoff(l, 0.2) == 0.0 &&
                near(specfun::smooth_cutoff(l, 0.15), 0.5, 1e-15);
       }},
      {"Biot-Savart speed vanishes at the center", [two] { return disk::biot_savart_radial(two, 0.0) == 0.0; }},
      {"zero vorticity has zero mass and coefficients", [zero_disk, table] {
         if (disk::total_mass(zero_disk) != 0.0) return false;
         for (double a : disk::project_initial(zero_disk, *table))
           if (a != 0.0) return false;
         return true;
       }},
      {"single mode halves at its half-life", [table] {
         const double nu = 1e-3;
         const disk::DiskSpectralSolution s(disk::RadialProfile::constant(1.0), table->prefix(1), nu, {1.0});
         const double j = table->zero(1);
         return near(s.evolve(std::log(2.0) / (nu * j * j))[0], 0.5, 1e-14);
       }},
      {"evolution at t = 0 is the identity", [two, table] {
         const disk::DiskSpectralSolution s(two, table, 1e-3);
         return s.evolve(0.0) == s.coefficients();
       }},
      {"Euler velocity is the initial velocity", [two] {
         const auto e = disk::euler_solution(two);
         return e.velocity(3.0, 0.5) == disk::biot_savart_radial(two, 0.5) && e.mass(7.0) == disk::total_mass(two);
       }},
      {"shear phi tends to phi0 as t -> 0", [] {
         const shear::ShearSolution s(shear::ShearProfile::exp_decay(1.0, 2.0), 1e-3);
         return near(s.phi(1e-9 / 1e-3, 0.3), std::exp(-0.6), 1e-4);
       }},
      {"shear boundary integral vanishes when phi0(0) = 0", [] {
         const shear::ShearSolution s(shear::ShearProfile::poly_gauss({0.0, 1.0}, 0.5), 1e-3);
         return s.boundary_integral(1.0) == 0.0;
       }},
      {"antisymmetric part of a symmetric matrix is zero", [] {
         const auto a = algebra::antisym_part(algebra::VelocityGradientSample::two_d(1.0, 2.0, 2.0, 3.0));
         for (const auto& row : a)
           for (double v : row)
             if (v != 0.0) return false;
         return true;
       }},
      {"F(0) is the zero matrix", [] {
         for (const auto& row : algebra::f_map({0.0, 0.0, 0.0}))
           for (double v : row)
             if (v != 0.0) return false;
         return true;
       }},
      {"sheet pairing with f = 1 closes", [two, table] {
         const disk::DiskSpectralSolution s(two, table, 1e-2);
         const auto p = diag::sheet_pairing(s, disk::euler_solution(two),
                                            diag::TestFunction::radial_polynomial({1.0}), 0.5);
         return p.gap <= 1e-8;
       }},
      {"zero data: every diagnostic vanishes", [zero_disk, table] {
         const disk::DiskSpectralSolution s(zero_disk, table, 1e-2);
         return diag::kato_layer_enstrophy(s, 1.0, LayerSpec{0.0, 0.0, 1.0}).value == 0.0 &&
                diag::layer_l1_mass(s, 1.0, 0.1).value == 0.0 && diag::boundary_flux(s, 1.0, 1.0).value == 0.0;
       }},
      {"fit recovers an exact power law", [] {
         std::vector<rates::Row> rows;
         for (double nu : {1e-2, 1e-3, 1e-4, 1e-5}) {
           rates::Row r;
           r.nu = nu;
           r.sup.value = 3.0 * std::pow(nu, 0.25);
           rows.push_back(r);
         }
         const auto f = rates::fit_rate(rows);
         return near(f.alpha, 0.25, 1e-12) && near(f.prefactor, 3.0, 1e-10) && f.residual < 1e-12;
       }},
      {"zero-data sweep refuses the fit", [] {
         rates::Experiment e;
         e.flow = rates::Flow::shear;
         e.shear_profile = shear::ShearProfile::constant(0.0);
         const auto s = rates::nu_sweep(e, {1e-2, 1e-3, 1e-4, 1e-5});
         return !s.fit && s.rows.size() == 4 && s.rows[0].sup.value == 0.0;
       }},
      {"minimal disk config parses", [] {
         const auto c = parse_config(
             R"({"flow": "disk", "profile": {"type": "constant", "value": 2}, "nu_grid": [1e-3], "T": 1})");
         return c.flow == rates::Flow::disk && c.nu_grid.size() == 1;
       }},
      {"nu = 0 is rejected", [] {
         try {
           parse_config(R"({"flow": "disk", "profile": {"type": "constant", "value": 2}, "nu_grid": [0], "T": 1})");
         } catch (const ConfigError& e) {
           return e.issues().size() == 1 && e.issues()[0].find("nu must be positive") != std::string::npos;
         }
         return false;
       }},
      {"missing table file is named", [] {
         try {
           parse_config(R"({"flow": "disk", "profile": {"type": "table", "path": "no_such_table.csv"},
                            "nu_grid": [1e-3]})");
         } catch (const ConfigError& e) {
           return e.issues().size() == 1 && e.issues()[0].find("no_such_table.csv") != std::string::npos;
         }
         return false;
       }},
  };
}

}  // namespace

int selftest(std::ostream& out) {
  int failures = 0;
  for (const auto& c : checks()) {
    bool ok = false;
    std::string note;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      note = std::string(" (threw: ") + e.what() + ")";
    }
    out << (ok ? "PASS " : "FAIL ") << c.name << note << '\n';
    failures += ok ? 0 : 1;
  }
  return failures;
}

}  // namespace vvlab::cli
