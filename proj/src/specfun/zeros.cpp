#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "vvlab/parallel.hpp"
#include "vvlab/specfun.hpp"

namespace vvlab::specfun {
namespace {

constexpr double kPi = std::numbers::pi;

double mcmahon(std::size_t k) {
  const double b = (static_cast<double>(k) + 0.25) * kPi;
  return b - 0.375 / b + 0.0234375 / (b * b * b);
}

double refine_zero(std::size_t k) {
  const double guess = mcmahon(k);
  double lo = guess - 0.25, hi = guess + 0.25;
  double flo = bessel_j(1, lo), fhi = bessel_j(1, hi);
  if (flo * fhi > 0.0)
    throw std::logic_error("j1_zeros: failed to bracket zero " + std::to_string(k) +
                           " near " + std::to_string(guess));
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    const double fm = bessel_j(1, mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  const double slack = hi - lo;
  for (int it = 0; it < 20; ++it) {
    const BesselPair b = bessel_j01(x);
    const double step = b.j1 / (b.j0 - b.j1 / x);
    const double next = x - step;
    if (next < lo - slack || next > hi + slack) break;
    x = next;
    if (std::abs(step) <= 1e-13 || std::abs(step) <= 4e-16 * x) break;
  }
  return x;
}

}  // namespace

double zero_lower_bound(std::size_t k) { return (static_cast<double>(k) + 0.25) * kPi - 0.1; }
double zero_upper_bound(std::size_t k) { return (static_cast<double>(k) + 0.25) * kPi; }

BesselTable::BesselTable(std::vector<double> zeros, std::vector<double> j0_at_zeros)
    : zeros_(std::move(zeros)), j0_(std::move(j0_at_zeros)) {
  if (zeros_.empty() || zeros_.size() != j0_.size())
    throw std::invalid_argument("BesselTable: need matching, nonempty zero and J0 lists");
  for (std::size_t i = 0; i < zeros_.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    const double z = zeros_[i];
    if (!(z > 1.0 + k && z <= kPi * (0.5 + k)))
      throw std::logic_error("BesselTable: zero " + std::to_string(i + 1) + " violates classical bounds");
    if (i > 0 && !(z > zeros_[i - 1])) throw std::logic_error("BesselTable: zeros not increasing");
    const bool negative = j0_[i] < 0.0;
    if (negative != (i % 2 == 0)) throw std::logic_error("BesselTable: J0 signs must alternate from -1");
  }
  inverse_square_suffix_.assign(zeros_.size() + 1, 0.0);
  for (std::size_t i = zeros_.size(); i-- > 0;)
    inverse_square_suffix_[i] = inverse_square_suffix_[i + 1] + 1.0 / (zeros_[i] * zeros_[i]);
}

double BesselTable::inverse_square_tail(std::size_t K) const {
  if (K > count()) throw std::out_of_range("inverse_square_tail: K exceeds table size");
  // 1/8 minus the partial sum; summing the table from the far end keeps the
  // small remainder accurate.
  return 0.125 - (inverse_square_suffix_[0] - inverse_square_suffix_[K]);
}

std::shared_ptr<const BesselTable> BesselTable::prefix(std::size_t K) const {
  if (K == 0 || K > count()) throw std::out_of_range("BesselTable::prefix: bad size");
  return std::make_shared<const BesselTable>(
      std::vector<double>(zeros_.begin(), zeros_.begin() + K),
      std::vector<double>(j0_.begin(), j0_.begin() + K));
}

BesselTable j1_zeros(std::size_t count) {
  if (count < 1) throw std::invalid_argument("j1_zeros: count must be >= 1");
  std::vector<double> zeros(count), j0(count);
  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t end = std::min(count, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      zeros[i] = refine_zero(i + 1);
      j0[i] = bessel_j(0, zeros[i]);
    }
  });
  return BesselTable(std::move(zeros), std::move(j0));
}

std::shared_ptr<const BesselTable> shared_j1_zeros(std::size_t count) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const BesselTable>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.lower_bound(count);
  if (it != cache.end()) {
    if (it->first == count) return it->second;
    return cache.emplace(count, it->second->prefix(count)).first->second;
  }
  auto table = std::make_shared<const BesselTable>(j1_zeros(count));
  cache.emplace(count, table);
  return table;
}

}  // namespace vvlab::specfun
