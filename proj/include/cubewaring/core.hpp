#pragma once

// Arithmetic substrate shared by every other module: primes, factorization,
// modular helpers, residue sets, exact rationals and multiplicative functions.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace cubewaring::core {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

// ---------------------------------------------------------------------------
// Exact rationals (small numerators/denominators, always normalized).

struct Rational {
  i64 num = 0;
  i64 den = 1;

  constexpr Rational() = default;
  constexpr Rational(i64 n) : num(n), den(1) {}  // NOLINT: implicit by intent
  constexpr Rational(i64 n, i64 d) : num(n), den(d) { normalize(); }

  constexpr void normalize() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const i64 g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  [[nodiscard]] constexpr double to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }

  friend constexpr Rational operator+(Rational a, Rational b) {
    return {a.num * b.den + b.num * a.den, a.den * b.den};
  }
  friend constexpr Rational operator-(Rational a, Rational b) {
    return {a.num * b.den - b.num * a.den, a.den * b.den};
  }
  friend constexpr Rational operator*(Rational a, Rational b) {
    return {a.num * b.num, a.den * b.den};
  }
  friend constexpr Rational operator/(Rational a, Rational b) {
    return {a.num * b.den, a.den * b.num};
  }
  friend constexpr Rational operator-(Rational a) { return {-a.num, a.den}; }
  friend constexpr bool operator==(Rational a, Rational b) {
    return a.num == b.num && a.den == b.den;
  }
};

// p^e for a real base and an exact rational exponent.
double pow_rational(double base, Rational exponent);

// ---------------------------------------------------------------------------
// Read-only numerical constants consumed by the reports.

struct Constants {
  static constexpr double tau = 0.00128432;          // mean value saving
  static constexpr double beta_density = 0.91709477;  // |C ∩ [1,X]| >> X^beta
  static constexpr double delta23 = 0.4988383;        // twelfth-power exponent
  static constexpr double rho_f81 = 0.004259;         // sup bound saving
  static constexpr Rational xi2{0, 1};
  static constexpr Rational xi3{7, 92};
};

// ---------------------------------------------------------------------------
// Modular helpers.

constexpr u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

constexpr u64 powmod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

// Least nonnegative residue of a (possibly negative) integer.
constexpr u64 mod_floor(i64 a, u64 m) {
  const i64 r = a % static_cast<i64>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

// Inverse of a modulo m; requires gcd(a, m) = 1.
u64 inverse_mod(u64 a, u64 m);

// floor(x^(1/k)) computed exactly.
u64 iroot(u64 x, unsigned k);

// x^e with overflow detection; returns false if the result exceeds 128 bits.
bool checked_pow(u128 base, unsigned exp, u128& out);

// Number of bits needed to hold a 128-bit value.
inline unsigned bit_width128(u128 v) {
  const auto hi = static_cast<u64>(v >> 64U);
  if (hi != 0) return 64U + static_cast<unsigned>(std::bit_width(hi));
  return static_cast<unsigned>(std::bit_width(static_cast<u64>(v)));
}

std::string to_string(u128 v);

// ---------------------------------------------------------------------------
// Primes and factorization.

// All primes in [2, limit], ascending. Throws ValidationError for limit < 2.
std::vector<u64> sieve_primes(u64 limit);

// Primes in the real interval [lo, hi].
std::vector<u64> primes_in_range(double lo, double hi);

// Deterministic Miller-Rabin, exact for every 64-bit integer.
bool is_prime(u64 n);

struct PrimePower {
  u64 p = 0;
  unsigned e = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct FactoredInteger {
  u64 value = 1;
  std::vector<PrimePower> factors;  // primes strictly increasing, e >= 1

  [[nodiscard]] bool valid() const;
};

FactoredInteger factorize(u64 q);

// Rule evaluated at each prime power p^e of the factorization.
using PrimePowerRule = std::function<double(u64 p, unsigned e)>;

double eval_multiplicative(const PrimePowerRule& rule, const FactoredInteger& q);

// ---------------------------------------------------------------------------
// Residue sets.

class ResidueSet {
 public:
  ResidueSet() = default;
  explicit ResidueSet(u64 modulus);

  [[nodiscard]] u64 modulus() const { return modulus_; }
  [[nodiscard]] bool contains(u64 r) const {
    return ((words_[r >> 6U] >> (r & 63U)) & 1U) != 0;
  }
  void insert(u64 r) { words_[r >> 6U] |= u64{1} << (r & 63U); }

  [[nodiscard]] u64 size() const;
  [[nodiscard]] std::vector<u64> members() const;
  [[nodiscard]] std::vector<u64> complement() const;
  [[nodiscard]] std::span<const u64> words() const { return words_; }

  friend bool operator==(const ResidueSet&, const ResidueSet&) = default;

 private:
  u64 modulus_ = 0;
  std::vector<u64> words_;
};

// {x^k mod m : 1 <= x <= m}, optionally restricted to gcd(x, m) = 1.
ResidueSet power_residues(unsigned k, u64 m, bool units_only = false);

// ---------------------------------------------------------------------------
// Deterministic fork-join over index chunks. Chunk boundaries depend only on
// (count, chunks), so per-chunk results can be reduced in a fixed order.

struct ChunkRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::vector<ChunkRange> split_chunks(std::size_t count, std::size_t chunks);

// Runs body(chunk_index, range) for every chunk using up to `threads`
// workers (0 = hardware concurrency).
void parallel_chunks(std::size_t count, std::size_t chunks, unsigned threads,
                     const std::function<void(std::size_t, ChunkRange)>& body);

unsigned resolve_threads(unsigned requested);

}  // namespace cubewaring::core
