#pragma once

// Independent reference computations shared by the unit tests. Nothing here
// calls into the library.

#include <cmath>
#include <functional>

namespace oracle {

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                           double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson over [a, b], split first into `pieces` intervals.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                               int pieces = 16) {
  double sum = 0.0;
  const double h = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + i * h, hi = lo + h, mid = 0.5 * (lo + hi);
    const double flo = f(lo), fmid = f(mid), fhi = f(hi);
    sum += simpson_step(f, lo, hi, flo, fmid, fhi, h / 6.0 * (flo + 4.0 * fmid + fhi), tol / pieces, 50);
  }
  return sum;
}

// Maclaurin series of J_n in long double.
inline long double bessel_series(int n, long double x, int terms = 80) {
  long double term = 1.0L;
  for (int i = 1; i <= n; ++i) term *= x / 2.0L / i;
  long double sum = term;
  for (int k = 1; k < terms; ++k) {
    term *= -(x * x / 4.0L) / (static_cast<long double>(k) * (k + n));
    sum += term;
  }
  return sum;
}

// Maclaurin series of erf.
inline long double erf_series(long double x, int terms) {
  long double sum = 0.0L, power = x;
  long double factorial = 1.0L;
  for (int n = 0; n < terms; ++n) {
    if (n > 0) factorial *= n;
    sum += ((n % 2) ? -1.0L : 1.0L) * power / (factorial * (2 * n + 1));
    power *= x * x;
  }
  return 2.0L / std::sqrt(3.14159265358979323846264338327950288L) * sum;
}

// Root of J_1 by plain bisection on the series.
inline double j1_root_bisection(double lo, double hi) {
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((bessel_series(1, lo) < 0) == (bessel_series(1, mid) < 0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
