#pragma once

// Representability over C: minimal s with n = Σ c_i^k, the squares lower
// bound construction, quartic coverage mod 81, and exact toy counts R(n),
// R_4(n) and K(m).

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cubewaring/core.hpp"
#include "cubewaring/cubes.hpp"
#include "cubewaring/expsums.hpp"

namespace cubewaring::search {

using core::u128;
using core::u64;

struct SearchRecord {
  u64 n = 0;
  unsigned k = 2;
  std::optional<unsigned> s_min;  // empty: none within the cap
  std::vector<u64> witness;       // ascending members of C
};

struct TailReport {
  u64 lo = 0;
  u64 hi = 0;
  unsigned bound = 0;
  u64 exceeding = 0;             // n in [lo, hi] with s_min > bound or none
  std::optional<u64> first_exceeding;
  unsigned max_s = 0;            // over the window, ignoring n without s_min
  u64 onset = 0;                 // least N0 with s_min(n) <= bound on [N0, N]
  [[nodiscard]] bool ok() const { return exceeding == 0; }
};

// Layered reachability over [0, N]: layer s holds the n that are a sum of
// exactly s k-th powers of members of C.
class MinimalSTable {
 public:
  [[nodiscard]] u64 limit() const { return N_; }
  [[nodiscard]] unsigned k() const { return k_; }
  [[nodiscard]] unsigned cap() const { return cap_; }
  [[nodiscard]] std::span<const u64> bases() const { return bases_; }

  [[nodiscard]] std::optional<unsigned> s_min(u64 n) const;
  // Lexicographically smallest ascending witness of minimal length.
  [[nodiscard]] SearchRecord record(u64 n) const;
  [[nodiscard]] std::vector<SearchRecord> records(u64 lo, u64 hi) const;
  [[nodiscard]] TailReport tail(u64 lo, unsigned bound) const;

 private:
  friend MinimalSTable minimal_s_table(unsigned, u64, unsigned, const cubes::CubeCache&, unsigned);
  [[nodiscard]] bool in_layer(unsigned s, u64 n) const;

  u64 N_ = 0;
  unsigned k_ = 2;
  unsigned cap_ = 0;
  std::vector<u64> bases_;  // c in C with c^k <= N, ascending
  std::vector<u64> steps_;  // bases_^k
  std::vector<std::vector<u64>> layers_;
  std::vector<std::uint8_t> smin_;  // 0xFF: none within the cap
};

inline constexpr u64 kDefaultTailWindow = 1'000'000;

// Requires cache.limit() >= floor(N^(1/k)); s_cap <= 64 and N <= 2^32.
MinimalSTable minimal_s_table(unsigned k, u64 N, unsigned s_cap, const cubes::CubeCache& cache,
                              unsigned threads = 0);

// ---------------------------------------------------------------------------

struct SquaresReport {
  unsigned j = 0;
  u64 target = 0;  // 2^(6+12j)
  u64 base = 0;    // 2^(2+6j)
  std::vector<std::array<u64, 4>> solutions;  // unordered, each sorted ascending
  u64 ordered_solutions = 0;
  u64 base_mod9 = 0;
  bool residue_excluded = false;  // base mod 9 is not a residue of C
  [[nodiscard]] bool unique() const {
    return solutions.size() == 1 && solutions.front() == std::array<u64, 4>{base, base, base, base};
  }
  [[nodiscard]] bool certified() const { return unique() && residue_excluded; }
};

// Every positive quadruple with x1^2 + ... + x4^2 = 2^(6+12j), j in {0, 1}.
SquaresReport verify_squares_lower_bound(unsigned j);

// ---------------------------------------------------------------------------

struct CoverageTerm {
  u64 p = 0;
  std::array<u64, 3> x{};
  u64 residue = 0;  // T(p x)^4 mod 81
};

struct CoverageReport {
  u64 modulus = 81;
  unsigned summands = 11;
  std::vector<u64> base;                // residues of T(p x)^4, ascending
  std::vector<u64> layer_sizes;         // |j-fold sumset| for j = 1..summands
  std::vector<std::vector<CoverageTerm>> witnesses;  // per residue, empty if missed
  [[nodiscard]] bool covered() const { return layer_sizes.back() == modulus; }
};

// {T(p x)^4 mod 81 : p, x_i <= 81} and its 11-fold sumset. p runs over
// 1..81, or over the primes up to 81.
CoverageReport quartic_residue_coverage(bool primes_only = false);

// ---------------------------------------------------------------------------

enum class RepMode { R, R4, K };

// Copies of h(α), W(α) and f(81α) in the product.
struct RepShape {
  unsigned plain = 0;
  unsigned scaled = 0;
  unsigned twelfth = 0;
};

RepShape default_shape(RepMode mode, const cubes::ParamSet& params);

inline constexpr u64 kHistogramBudget = 100'000'000;
inline constexpr double kToyMaxP = 60.0;

// The factors of the product for a mode: h and W from the weights, and f
// with its values multiplied by 81.
std::vector<expsums::Generator> rep_factors(const RepShape& shape, const cubes::ParamSet& params);

// Coefficient of e(αn) in the product of the factors, by exact sparse
// convolution with values above n dropped.
u64 rep_count(std::span<const expsums::Generator> factors, u128 n);
u64 rep_count(RepMode mode, u128 n, const cubes::ParamSet& params,
              std::optional<RepShape> shape = std::nullopt);

// The same coefficient as the trapezoid rule for ∫ Π G_i(α) e(-αn) dα on L
// nodes, L a power of two above the largest value (evaluated by FFT).
double rep_count_fourier(std::span<const expsums::Generator> factors, u128 n);
std::vector<double> rep_count_fourier(std::span<const expsums::Generator> factors,
                                      std::span<const u128> ns);

}  // namespace cubewaring::search
