#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <vector>

#include "vvlab/layer_spec.hpp"

namespace vvlab::specfun {

// J_n(x) for n in {0, 1, 2} and finite x >= 0.
double bessel_j(int order, double x);

struct BesselPair {
  double j0;
  double j1;
};
// J_0 and J_1 together; cheaper than two bessel_j calls for large x.
BesselPair bessel_j01(double x);

double erf(double x);
double erfc(double x);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order = 0;

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

QuadratureRule gauss_legendre(int order, double a, double b);

// Nested 7-point Gauss / 15-point Kronrod pair on a single panel.
struct KronrodPanel {
  std::array<double, 15> x;
  std::array<double, 15> kronrod_w;
  std::array<double, 15> gauss_w;  // zero on the Kronrod-only nodes
};
KronrodPanel kronrod_panel(double a, double b);

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

template <class F>
Estimate integrate_kronrod(F&& f, double a, double b) {
  const KronrodPanel p = kronrod_panel(a, b);
  double k = 0.0, g = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double v = f(p.x[i]);
    k += p.kronrod_w[i] * v;
    g += p.gauss_w[i] * v;
  }
  return {k, std::abs(k - g)};
}

// Composite Kronrod over consecutive panel edges.
template <class F>
Estimate integrate_panels(const std::vector<double>& edges, F&& f) {
  Estimate total;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const Estimate e = integrate_kronrod(f, edges[i], edges[i + 1]);
    total.value += e.value;
    total.error += e.error;
  }
  return total;
}

// Panel edges on [a, b]: first_width at a, widths growing by `ratio` until
// they reach max_width, then uniform panels of at most max_width.
std::vector<double> graded_edges(double a, double b, double first_width, double ratio,
                                 double max_width);

// Positive zeros of J_1 with J_0 evaluated there.
class BesselTable {
 public:
  BesselTable(std::vector<double> zeros, std::vector<double> j0_at_zeros);

  std::size_t count() const { return zeros_.size(); }
  // k is 1-based to match the usual j_{1,k} numbering.
  double zero(std::size_t k) const { return zeros_[k - 1]; }
  double j0_at_zero(std::size_t k) const { return j0_[k - 1]; }
  int sign(std::size_t k) const { return j0_[k - 1] < 0.0 ? -1 : 1; }

  const std::vector<double>& zeros() const { return zeros_; }
  const std::vector<double>& j0_at_zeros() const { return j0_; }

  // 1/8 - sum_{k<=K} j_k^{-2}, the exact remainder of the Rayleigh sum.
  double inverse_square_tail(std::size_t K) const;

  std::shared_ptr<const BesselTable> prefix(std::size_t K) const;

 private:
  std::vector<double> zeros_;
  std::vector<double> j0_;
  std::vector<double> inverse_square_suffix_;  // sum over k > index, computed from the far end
};

BesselTable j1_zeros(std::size_t count);

// Process-wide cache; tables are immutable, so sharing is safe.
std::shared_ptr<const BesselTable> shared_j1_zeros(std::size_t count);

// Bounds on j_{1,k} valid for every k >= 1 (McMahon with a margin).
double zero_lower_bound(std::size_t k);
double zero_upper_bound(std::size_t k);

double smooth_cutoff(const LayerSpec& layer, double distance_to_boundary);
double smooth_cutoff_derivative(const LayerSpec& layer, double distance_to_boundary);

// S_m(a) = int_0^1 r^m J_1(a r) dr for even m >= 0 and
// U_m(a) = int_0^1 r^m J_0(a r) dr for odd m >= 1, by the downward-free
// recurrence in m. `amplification` receives the product of the recurrence
// multipliers, a measure of cancellation.
struct BesselMoments {
  std::vector<double> s;  // s[i] = S_{2i}
  std::vector<double> u;  // u[i] = U_{2i+1}
  double amplification = 1.0;
};
BesselMoments bessel_moments(double a, double j0a, double j1a, int max_index);

}  // namespace vvlab::specfun
