#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "vvlab/specfun.hpp"

namespace vvlab::specfun {
namespace {

// Below this the power series loses at most ~1e-13 to cancellation.
constexpr double kSeriesLimit = 8.0;
// Above this the Hankel expansion reaches ~1e-20 before it diverges.
constexpr double kAsymptoticLimit = 25.0;

void check_argument(double x) {
  if (!std::isfinite(x) || x < 0.0)
    throw std::domain_error("bessel_j: argument must be finite and >= 0, got " + std::to_string(x));
}

double series(int n, double x) {
  const double h = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= n; ++i) term *= h / i;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -h * h / (static_cast<double>(k) * (k + n));
    sum += term;
    if (std::abs(term) < 1e-18) break;
  }
  return sum;
}

// Miller's backward recurrence normalized by 1 = J0 + 2 sum J_{2k}.
struct Miller {
  double j0, j1, j2;
};
Miller miller(double x) {
  int start = static_cast<int>(x + 12.0 * std::cbrt(x) + 20.0);
  start += start % 2;
  double next = 0.0, cur = 1e-30, norm = 0.0;
  Miller out{};
  for (int n = start; n >= 1; --n) {
    const double prev = 2.0 * n / x * cur - next;
    next = cur;
    cur = prev;  // cur is now J_{n-1}
    if ((n - 1) % 2 == 0 && n - 1 > 0) norm += 2.0 * cur;
    if (n - 1 == 2) out.j2 = cur;
    if (n - 1 == 1) out.j1 = cur;
    if (std::abs(cur) > 1e250) {
      next *= 1e-250;
      cur *= 1e-250;
      norm *= 1e-250;
      out.j2 *= 1e-250;
      out.j1 *= 1e-250;
    }
  }
  norm += cur;
  out.j0 = cur / norm;
  out.j1 /= norm;
  out.j2 /= norm;
  return out;
}

// Hankel P and Q for order n.
void hankel_pq(int n, double x, double& p, double& q) {
  const double mu = 4.0 * n * n;
  const double inv8x = 1.0 / (8.0 * x);
  double term = 1.0;
  p = 1.0;
  q = 0.0;
  for (int k = 1; k < 80; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * (mu - odd * odd) * inv8x / k;
    if (std::abs(next) > std::abs(term)) break;
    term = next;
    const double signed_term = ((k / 2) % 2 == 0) ? term : -term;
    if (k % 2 == 1) {
      q += signed_term;
    } else {
      p += signed_term;
    }
    if (std::abs(term) < 1e-18) break;
  }
}

// cos and sin of x - (n/2 + 1/4) pi from cos x and sin x.
void phase(int n, double c, double s, double& cos_chi, double& sin_chi) {
  constexpr double r = std::numbers::sqrt2 / 2.0;
  double cp = 0.0, sp = 0.0;
  switch (n) {
    case 0: cp = r; sp = r; break;
    case 1: cp = -r; sp = r; break;
    default: cp = -r; sp = -r; break;
  }
  cos_chi = c * cp + s * sp;
  sin_chi = s * cp - c * sp;
}

double asymptotic(int n, double x, double c, double s) {
  double p, q, cc, sc;
  hankel_pq(n, x, p, q);
  phase(n, c, s, cc, sc);
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cc - q * sc);
}

}  // namespace

double bessel_j(int order, double x) {
  if (order < 0 || order > 2)
    throw std::invalid_argument("bessel_j: order must be 0, 1 or 2");
  check_argument(x);
  if (x < kSeriesLimit) return series(order, x);
  if (x < kAsymptoticLimit) {
    const Miller m = miller(x);
    return order == 0 ? m.j0 : order == 1 ? m.j1 : m.j2;
  }
  return asymptotic(order, x, std::cos(x), std::sin(x));
}

BesselPair bessel_j01(double x) {
  check_argument(x);
  if (x < kSeriesLimit) return {series(0, x), series(1, x)};
  if (x < kAsymptoticLimit) {
    const Miller m = miller(x);
    return {m.j0, m.j1};
  }
  const double c = std::cos(x), s = std::sin(x);
  return {asymptotic(0, x, c, s), asymptotic(1, x, c, s)};
}

BesselMoments bessel_moments(double a, double j0a, double j1a, int max_index) {
  if (!(a > 0.0) || max_index < 0) throw std::invalid_argument("bessel_moments: need a > 0");
  BesselMoments m;
  m.s.resize(max_index + 1);
  m.u.resize(max_index + 1);
  m.s[0] = (1.0 - j0a) / a;
  const double a2 = a * a;
  double growth = 1.0;
  for (int i = 1; i <= max_index; ++i) {
    const double mm = 2.0 * i;
    const double factor = mm * (mm - 2.0) / a2;
    const double prev = i == 1 ? 0.0 : m.s[i - 1];
    m.s[i] = -j0a / a + mm * j1a / a2 - factor * prev;
    growth *= std::max(1.0, factor);
    m.amplification = std::max(m.amplification, growth);
  }
  for (int i = 0; i <= max_index; ++i) {
    const double n = 2.0 * i + 1.0;
    m.u[i] = j1a / a - (n - 1.0) / a * m.s[i];
  }
  return m;
}

}  // namespace vvlab::specfun
