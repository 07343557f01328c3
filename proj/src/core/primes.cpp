#include <cmath>
#include <vector>

#include "cubewaring/core.hpp"
#include "cubewaring/error.hpp"

namespace cubewaring::core {

std::vector<u64> sieve_primes(u64 limit) {
  if (limit < 2) throw ValidationError("sieve_primes: limit must be >= 2");
  // Odd-only sieve: bit i stands for 2i+1.
  const u64 half = (limit + 1) / 2;
  std::vector<bool> composite(half, false);
  for (u64 i = 1; (2 * i + 1) * (2 * i + 1) <= limit; ++i) {
    if (composite[i]) continue;
    const u64 p = 2 * i + 1;
    for (u64 j = p * p / 2; j < half; j += p) composite[j] = true;
  }
  std::vector<u64> primes;
  primes.reserve(static_cast<std::size_t>(
      1.3 * static_cast<double>(limit) / std::log(static_cast<double>(limit) + 1.0) + 8));
  primes.push_back(2);
  for (u64 i = 1; i < half; ++i) {
    if (!composite[i]) primes.push_back(2 * i + 1);
  }
  return primes;
}

std::vector<u64> primes_in_range(double lo, double hi) {
  std::vector<u64> out;
  if (hi < 2.0 || hi < lo) return out;
  const auto top = static_cast<u64>(std::floor(hi));
  const auto bottom = static_cast<u64>(std::ceil(std::max(lo, 2.0)));
  for (u64 p : sieve_primes(std::max<u64>(top, 2))) {
    if (p >= bottom && p <= top) out.push_back(p);
  }
  return out;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : small) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  // These twelve bases are a proven witness set for n < 3.3 * 10^24.
  for (u64 a : small) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace cubewaring::core
