#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "vvlab/specfun.hpp"

namespace vvlab::diag::detail {

using Samples = std::array<double, 15>;

// Polynomial interpolant through the 15 Kronrod nodes of a panel, in the
// barycentric second form on reference coordinates.
class PanelInterpolant {
 public:
  PanelInterpolant(const specfun::KronrodPanel& panel, const Samples& values) : values_(values) {
    center_ = 0.5 * (panel.x[0] + panel.x[14]);
    half_ = 0.5 * (panel.x[14] - panel.x[0]);
    for (int i = 0; i < 15; ++i) y_[i] = (panel.x[i] - center_) / half_;
    for (int i = 0; i < 15; ++i) {
      double w = 1.0;
      for (int j = 0; j < 15; ++j)
        if (j != i) w *= y_[i] - y_[j];
      w_[i] = 1.0 / w;
    }
  }

  double operator()(double x) const {
    const double y = (x - center_) / half_;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 15; ++i) {
      const double d = y - y_[i];
      if (d == 0.0) return values_[i];
      const double c = w_[i] / d;
      num += c * values_[i];
      den += c;
    }
    return num / den;
  }

 private:
  Samples values_;
  std::array<double, 15> y_{}, w_{};
  double center_ = 0.0, half_ = 1.0;
};

inline double signed_power(double v, double p) { return p == 1.0 ? v : std::copysign(std::pow(std::abs(v), p), v); }

// int_a^b |f|^p w for f sampled at the panel's Kronrod nodes. Where the
// samples change sign the kink is located on the interpolant and each
// smooth piece gets its own Gauss rule. The error is the Kronrod/Gauss
// difference of the signed power, which is smooth across the kink.
template <class W>
specfun::Estimate abs_power_panel(const specfun::KronrodPanel& panel, double a, double b, const Samples& f, double p,
                         W&& weight) {
  double k_signed = 0.0, g_signed = 0.0, k_abs = 0.0;
  bool sign_change = false;
  for (int i = 0; i < 15; ++i) {
    const double w = weight(panel.x[i]);
    const double s = signed_power(f[i], p) * w;
    k_signed += panel.kronrod_w[i] * s;
    g_signed += panel.gauss_w[i] * s;
    k_abs += panel.kronrod_w[i] * std::abs(s);
    if (i > 0 && ((f[i] < 0.0 && f[i - 1] > 0.0) || (f[i] > 0.0 && f[i - 1] < 0.0))) sign_change = true;
  }
  const double err = std::abs(k_signed - g_signed);
  if (!sign_change) return {k_abs, err};

  const PanelInterpolant interp(panel, f);
  std::vector<double> cuts;
  for (int i = 1; i < 15; ++i) {
    if (!((f[i] < 0.0 && f[i - 1] > 0.0) || (f[i] > 0.0 && f[i - 1] < 0.0))) continue;
    double lo = panel.x[i - 1], hi = panel.x[i];
    const bool lo_negative = f[i - 1] < 0.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((interp(mid) < 0.0) == lo_negative) lo = mid; else hi = mid;
    }
    cuts.push_back(0.5 * (lo + hi));
  }
  static const specfun::QuadratureRule rule = specfun::gauss_legendre(10, 0.0, 1.0);
  std::vector<double> edges{a};
  edges.insert(edges.end(), cuts.begin(), cuts.end());
  edges.push_back(b);
  double sum = 0.0;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double lo = edges[s], h = edges[s + 1] - lo;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double x = lo + h * rule.nodes[q];
      sum += h * rule.weights[q] * std::pow(std::abs(interp(x)), p) * weight(x);
    }
  }
  return {sum, err};
}

// Edges t0, 2 t0, 4 t0, ... ending exactly at T.
inline std::vector<double> log_time_edges(double t0, double T, double ratio) {
  std::vector<double> edges{t0};
  double t = t0;
  while (t * ratio < T * (1.0 - 1e-12)) {
    t *= ratio;
    edges.push_back(t);
  }
  if (edges.size() > 1 && T < edges.back() * std::sqrt(ratio)) edges.back() = T;
  else edges.push_back(T);
  return edges;
}

}  // namespace vvlab::diag::detail
