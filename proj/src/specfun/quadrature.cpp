#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "vvlab/specfun.hpp"

namespace vvlab::specfun {
namespace {

struct Reference {
  std::vector<double> x, w;
};

Reference legendre_reference(int n) {
  Reference r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

const Reference& cached_reference(int n) {
  static std::mutex mutex;
  static std::map<int, Reference> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, legendre_reference(n)).first;
  return it->second;
}

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace

QuadratureRule gauss_legendre(int order, double a, double b) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw std::invalid_argument("gauss_legendre: invalid interval");
  const Reference& ref = cached_reference(order);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  QuadratureRule rule;
  rule.order = order;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    rule.nodes[i] = mid + half * ref.x[i];
    rule.weights[i] = half * ref.w[i];
  }
  return rule;
}

KronrodPanel kronrod_panel(double a, double b) {
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  KronrodPanel p{};
  for (int i = 0; i < 7; ++i) {
    p.x[i] = mid - half * kXgk[i];
    p.x[14 - i] = mid + half * kXgk[i];
    p.kronrod_w[i] = p.kronrod_w[14 - i] = half * kWgk[i];
    if (i % 2 == 1) p.gauss_w[i] = p.gauss_w[14 - i] = half * kWg[i / 2];
  }
  p.x[7] = mid;
  p.kronrod_w[7] = half * kWgk[7];
  p.gauss_w[7] = half * kWg[3];
  return p;
}

std::vector<double> graded_edges(double a, double b, double first_width, double ratio,
                                 double max_width) {
  if (!(a < b) || !(first_width > 0.0) || !(ratio >= 1.0) || !(max_width > 0.0))
    throw std::invalid_argument("graded_edges: invalid arguments");
  std::vector<double> edges{a};
  double width = std::min(first_width, max_width);
  double x = a;
  while (x + width < b) {
    x += width;
    edges.push_back(x);
    width = std::min(width * ratio, max_width);
  }
  // Fold a sliver at the end into the previous panel.
  const std::size_t n = edges.size();
  if (n > 1 && b - edges[n - 1] < 0.25 * (edges[n - 1] - edges[n - 2])) {
    edges.back() = b;
  } else {
    edges.push_back(b);
  }
  return edges;
}

}  // namespace vvlab::specfun
