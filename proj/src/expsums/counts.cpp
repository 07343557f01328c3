#include <cmath>

#include "cubewaring/error.hpp"
#include "cubewaring/expsums.hpp"
#include "cubewaring/transform.hpp"

namespace cubewaring::expsums {
namespace {

constexpr u64 kMaxModulus = 1'000'000;

u64 floor_tolerant(double v) {
  return static_cast<u64>(std::max(0.0, std::floor(v + 1e-9 * std::max(1.0, std::abs(v)))));
}

// Histogram of T(x) mod q over x in [1, X]^3.
std::vector<u64> sum_histogram(u64 q, u64 X) {
  std::vector<u64> cubes(q, 0);
  for (u64 x = 1; x <= X; ++x) ++cubes[core::powmod(x, 3, q)];
  const auto two = transform::cyclic_convolve(cubes, cubes);
  return transform::cyclic_convolve(two, cubes);
}

}  // namespace

std::vector<u64> power_histogram(u64 q, u64 X, unsigned k, u64 scale) {
  if (q == 0) throw ValidationError("power_histogram: q must be positive");
  const auto sums = sum_histogram(q, X);
  const u64 s3 = core::powmod(scale, 3, q);
  std::vector<u64> out(q, 0);
  for (u64 v = 0; v < q; ++v) {
    if (sums[v] != 0) out[core::powmod(core::mulmod(s3, v, q), k, q)] += sums[v];
  }
  return out;
}

u128 congruence_count(CountMode mode, u64 q, const cubes::ParamSet& params) {
  if (q == 0 || q > kMaxModulus) throw ValidationError("congruence_count: q must lie in [1, 10^6]");
  const auto k = static_cast<unsigned>(params.k);
  std::vector<u64> hist;
  if (mode == CountMode::R) {
    const u64 P = floor_tolerant(params.P);
    if (static_cast<double>(P) * P * P > static_cast<double>(cubes::kEnumerationBudget)) {
      throw ResourceError("congruence_count: P^3 exceeds the enumeration budget");
    }
    hist = power_histogram(q, P, k);
  } else {
    const u64 X = floor_tolerant(std::cbrt(params.H));
    const auto primes = core::primes_in_range(params.M / 2.0, params.M);
    if (static_cast<double>(X) * X * X * static_cast<double>(primes.size()) >
        static_cast<double>(cubes::kEnumerationBudget)) {
      throw ResourceError("congruence_count: H times the prime count exceeds the budget");
    }
    hist.assign(q, 0);
    const auto sums = sum_histogram(q, X);
    for (u64 p : primes) {
      const u64 p3 = core::powmod(p, 3, q);
      for (u64 v = 0; v < q; ++v) {
        if (sums[v] != 0) hist[core::powmod(core::mulmod(p3, v, q), k, q)] += sums[v];
      }
    }
  }
  const auto pairs = transform::cyclic_convolve(hist, hist);
  u128 total = 0;
  for (u64 d : pairs) total += static_cast<u128>(d) * d;
  return total;
}

}  // namespace cubewaring::expsums
