#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "panel_math.hpp"
#include "vvlab/diagnostics.hpp"

namespace vvlab::diag {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPanels = 64;
constexpr int kSupGrid = 4096;

// 2 pi int_0^1 |g|^s r dr with kinks of |g| split out on each panel.
template <class G>
double disk_power(G&& g, double s) {
  double sum = 0.0;
  for (int q = 0; q < kPanels; ++q) {
    const double a = static_cast<double>(q) / kPanels, b = static_cast<double>(q + 1) / kPanels;
    const auto kp = specfun::kronrod_panel(a, b);
    detail::Samples f;
    for (int i = 0; i < 15; ++i) f[i] = g(kp.x[i]);
    sum += detail::abs_power_panel(kp, a, b, f, s, [](double r) { return 2.0 * kPi * r; }).value;
  }
  return sum;
}

template <class G>
double grid_sup(G&& g) {
  double sup = 0.0;
  for (int i = 0; i < kSupGrid; ++i) sup = std::max(sup, std::abs(g(static_cast<double>(i) / (kSupGrid - 1))));
  return sup;
}

}  // namespace

TraceRatio trace_ratio(const TestFunction& f, double p, double q) {
  if (!f.on_disk()) throw std::invalid_argument("trace_ratio: test function must live on the disk");
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("trace_ratio: need finite p > 1");
  if (!(q >= 1.0) || !std::isfinite(q)) throw std::invalid_argument("trace_ratio: need finite q >= 1");
  const auto value = [&](double r) { return f.value(r); };
  const auto grad = [&](double r) { return f.gradient(r); };

  TraceRatio out;
  // The trace of a radial function is constant on the unit circle.
  out.trace_norm = std::pow(2.0 * kPi, 1.0 / p) * std::abs(f.value(1.0));
  const double s = (p - 1.0) * q;
  out.lebesgue_norm = std::pow(disk_power(value, s), 1.0 / s);
  if (q == 1.0) {
    out.sobolev_norm = std::max(grid_sup(value), grid_sup(grad));
  } else {
    const double qp = q / (q - 1.0);
    out.sobolev_norm = std::pow(disk_power(value, qp) + disk_power(grad, qp), 1.0 / qp);
  }
  const double denominator = std::pow(out.lebesgue_norm, 1.0 - 1.0 / p) * std::pow(out.sobolev_norm, 1.0 / p);
  if (!(denominator > 0.0) || !std::isfinite(denominator))
    throw std::invalid_argument("trace_ratio: degenerate denominator for " + f.describe());
  out.ratio = out.trace_norm / denominator;
  return out;
}

}  // namespace vvlab::diag
