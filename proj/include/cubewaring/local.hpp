#pragma once

// Local factors of the singular series: solution counts M_n(p^h), sigma(p),
// truncated products over primes, the residue conditions on the shifts, the
// T-sets, congruence solubility, and the quartic series S_m(q).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cubewaring/core.hpp"
#include "cubewaring/expsums.hpp"

namespace cubewaring::local {

using core::u128;
using core::u64;
using expsums::Slot;

// gamma(p) = 2 tau + 1 where p^tau || 3k.
unsigned gamma_depth(u64 p, unsigned k);

struct TSets {
  core::ResidueSet T;       // x^3 + C
  core::ResidueSet T_star;  // same with p ∤ x and p ∤ x^3 + C
  core::ResidueSet T_k;     // k-th powers of T
};

// `modulus` must be a prime power.
TSets t_sets(u64 C, u64 modulus, unsigned k);

// Operation budget of the exact histogram convolutions.
inline constexpr u64 kCountBudget = 2'000'000'000;
inline constexpr u64 kMaxCountModulus = 1'000'000;

// Number of x in [1, p^h]^{s'} with Σ (x_i^3 + p_i^3 C_i)^k ≡ n (mod p^h).
// With `unit_first`, x_1 is further restricted to p ∤ x_1 and
// p ∤ x_1^3 + p_1^3 C_1.
u128 count_solutions_mod(std::span<const Slot> slots, unsigned k, u64 n, u64 p, unsigned h,
                         bool unit_first = false);

struct DepthPolicy {
  unsigned start = 0;  // 0 means gamma(p)
  u64 cap_modulus = kMaxCountModulus;
  double tolerance = 1e-6;
};

struct LocalFactor {
  u64 p = 0;
  unsigned h = 0;
  double value = 0;
  bool stabilized = false;
};

// p^{(1-s')h} M_n(p^h) at the first depth h >= start agreeing with the
// previous one within the tolerance, or at the last affordable depth.
LocalFactor sigma_p(u64 p, std::span<const Slot> slots, u64 n, unsigned k,
                    const DepthPolicy& policy = {});

struct SeriesResult {
  double value = 0;
  double tail_exponent = 0;  // (s'-1)/3k - 1
  std::vector<LocalFactor> factors;
};

// Π_{p <= Q} sigma(p), reduced in ascending prime order.
SeriesResult singular_series(std::span<const Slot> slots, u64 n, unsigned k, u64 Q,
                             unsigned threads = 0, const DepthPolicy& policy = {});

struct LocalConditions {
  unsigned k = 2;
  u64 residue = 0;
  u64 modulus = 1;
  bool ok = true;
  std::vector<std::size_t> failing;  // slot indices
};

// Every effective shift p^3 C ≡ 28 (mod 108) for k = 2, ≡ 0 (mod 162) for
// k = 3. k = 4 is unsupported.
LocalConditions check_local_conditions(std::span<const Slot> slots, unsigned k);

struct Solubility {
  u64 modulus = 1;
  std::vector<bool> soluble;  // indexed by n mod modulus
  [[nodiscard]] bool all() const;
  [[nodiscard]] bool at(u64 n) const { return soluble[n % modulus]; }
};

// y_1^e + ... + y_v^e ≡ n (mod m) for each n, optionally with gcd(y_1, m) = 1.
Solubility congruence_soluble(unsigned exponent, unsigned vars, u64 modulus, bool unit_first);

// ---------------------------------------------------------------------------
// S_m(q) = q^{-46} Σ_{(a,q)=1} S_12(q, 81a)^46 e_q(-a(n - m)).

inline constexpr unsigned kQuarticSlots = 46;
inline constexpr u64 kQuarticMaxQ = 200;

struct QuarticTerm {
  u64 q = 0;
  double value = 0;
  double imag_residue = 0;
};

struct QuarticSeries {
  double value = 0;
  bool positive = false;
  std::vector<QuarticTerm> terms;                  // q = 1..Q
  std::vector<std::pair<u64, double>> sigma_m;     // Σ_{p^h <= Q} S_m(p^h)
};

QuarticTerm quartic_term(u64 m, u64 n, u64 q);
QuarticSeries quartic_series(u64 m, u64 n, u64 Q);

struct QuarticIdentity {
  unsigned h = 0;
  double partial_sum = 0;  // Σ_{l <= h} S_m(3^l)
  double normalized = 0;   // 3^{-45h} M_{n,m}(3^h)
};

// Requires m ≡ n (mod 81) and 4 <= h <= 6. M_{n,m}(3^h) counts
// x in [1, 3^h]^46 with Σ x_i^12 ≡ (n - m)/81 (mod 3^{h-4}).
QuarticIdentity quartic_three_adic(u64 m, u64 n, unsigned h);

}  // namespace cubewaring::local
