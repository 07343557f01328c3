#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "cubewaring/core.hpp"
#include "cubewaring/error.hpp"

namespace cubewaring::core {
namespace {

constexpr u64 kTrialLimit = 1'000'000;

const std::vector<u64>& trial_primes() {
  static const std::vector<u64> primes = sieve_primes(kTrialLimit);
  return primes;
}

// Brent's variant of Pollard rho; n is an odd composite.
u64 pollard_rho(u64 n) {
  for (u64 c = 1;; ++c) {
    auto f = [&](u64 x) { return (mulmod(x, x, n) + c) % n; };
    u64 y = 2;
    u64 x = 2;
    u64 g = 1;
    u64 q = 1;
    u64 ys = 2;
    constexpr u64 m = 128;
    for (u64 r = 1; g == 1; r <<= 1U) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      for (u64 k = 0; k < r && g == 1; k += m) {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split(u64 n, std::map<u64, unsigned>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  const u64 d = pollard_rho(n);
  split(d, out);
  split(n / d, out);
}

}  // namespace

bool FactoredInteger::valid() const {
  u128 product = 1;
  u64 last = 1;
  for (const auto& [p, e] : factors) {
    if (p <= last || e == 0 || !is_prime(p)) return false;
    last = p;
    for (unsigned i = 0; i < e; ++i) {
      product *= p;
      if (product > value) return false;
    }
  }
  return product == value;
}

FactoredInteger factorize(u64 q) {
  if (q == 0) throw ValidationError("factorize: q must be positive");
  FactoredInteger result;
  result.value = q;
  u64 rest = q;
  for (u64 p : trial_primes()) {
    if (p * p > rest) break;
    if (rest % p != 0) continue;
    unsigned e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    result.factors.push_back({p, e});
  }
  if (rest > 1) {
    if (rest < kTrialLimit * kTrialLimit || is_prime(rest)) {
      // Every prime below the trial limit is gone, so rest is prime here
      // whenever rest < limit^2.
      if (!result.factors.empty() && result.factors.back().p == rest) {
        ++result.factors.back().e;
      } else {
        result.factors.push_back({rest, 1});
      }
    } else {
      std::map<u64, unsigned> big;
      split(rest, big);
      for (const auto& [p, e] : big) result.factors.push_back({p, e});
    }
  }
  return result;
}

double eval_multiplicative(const PrimePowerRule& rule, const FactoredInteger& q) {
  double value = 1.0;
  for (const auto& [p, e] : q.factors) value *= rule(p, e);
  return value;
}

u64 inverse_mod(u64 a, u64 m) {
  i128 t = 0;
  i128 new_t = 1;
  i128 r = m;
  i128 new_r = a % m;
  while (new_r != 0) {
    const i128 quotient = r / new_r;
    t -= quotient * new_t;
    std::swap(t, new_t);
    r -= quotient * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) throw DomainError("inverse_mod: argument not invertible");
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

}  // namespace cubewaring::core
