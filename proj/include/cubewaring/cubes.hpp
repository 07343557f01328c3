#pragma once

// The set C of sums of three positive cubes: membership caches, ordered
// representation counts r3(n), the coupled parameter system, the weights a_x
// and b_h, and the mean value U(X).

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "cubewaring/core.hpp"

namespace cubewaring::cubes {

using core::Rational;
using core::u64;

// Membership bits for [1, X] (bit j of byte i is 8i + j + 1), optionally
// followed by X little-endian 32-bit counts. The byte layout is exactly the
// payload of the on-disk cache file, so a loaded cache can point straight
// into a memory map.
class CubeCache {
 public:
  static constexpr u64 kDefaultCap = u64{1} << 33U;

  CubeCache() = default;

  [[nodiscard]] u64 limit() const { return limit_; }
  [[nodiscard]] bool has_counts() const { return counts_ != nullptr; }

  // n outside [1, X] is reported as not a member.
  [[nodiscard]] bool contains(u64 n) const {
    if (n == 0 || n > limit_) return false;
    const u64 i = n - 1;
    return ((bits_[i >> 3U] >> (i & 7U)) & 1U) != 0;
  }

  // Ordered count r3(n); requires counts and 1 <= n <= X.
  [[nodiscard]] std::uint32_t r3(u64 n) const;

  [[nodiscard]] u64 member_count() const;
  [[nodiscard]] std::vector<u64> members(u64 upto) const;

  [[nodiscard]] std::span<const std::uint8_t> membership_bytes() const;
  [[nodiscard]] std::span<const std::uint8_t> count_bytes() const;

  static std::size_t membership_size(u64 X) { return static_cast<std::size_t>((X + 7) / 8); }
  static std::size_t payload_size(u64 X, bool with_counts) {
    return membership_size(X) + (with_counts ? static_cast<std::size_t>(X) * 4 : 0);
  }

  // Wraps an existing payload; `owner` keeps the bytes alive.
  static CubeCache from_payload(u64 X, bool with_counts, const std::uint8_t* payload,
                                std::shared_ptr<const void> owner);

 private:
  u64 limit_ = 0;
  const std::uint8_t* bits_ = nullptr;
  const std::uint8_t* counts_ = nullptr;
  std::shared_ptr<const void> owner_;
};

// Exact cache for C ∩ [1, X]. X < 3 yields an empty cache; X above `cap`
// throws ResourceError. Work is split into output stripes, so the result is
// independent of the thread count.
CubeCache build_cube_cache(u64 X, bool with_counts, unsigned threads = 0,
                           u64 cap = CubeCache::kDefaultCap);

// Direct count of ordered triples, for small n only (oracle use).
u64 r3_direct(u64 n);

enum class ResidueSource { exact, cache };

// Residues of C mod m: the threefold sumset of cube residues, or the classes
// hit by the cache members.
core::ResidueSet c_residues(u64 m);
core::ResidueSet c_residues(u64 m, const CubeCache& cache);

// ---------------------------------------------------------------------------

struct ParamSet {
  int k = 2;
  double n = 0;
  double P = 0;
  Rational gamma;
  double M = 0;
  double H = 0;
  double H1 = 0;
  double H2 = 0;
  double H3 = 0;
  double eta = 0.1;
  int s = 0;
  int t = 0;

  static Rational gamma_for(int k);
  static int s_for(int k);
  static int t_for(int k);

  // P = n^(1/3k) with M = P^gamma(k) and H = max(M^(5-1/k), M^(2^(k-1))).
  static ParamSet from_n(int k, double n, double eta = 0.1);
  static ParamSet from_P(int k, double P, double eta = 0.1);

  // Toy instances with free P, M, H (the coupled ones leave W empty at
  // enumerable sizes). n is set to P^(3k).
  static ParamSet toy(int k, double P, double M, double H, double eta = 0.1);

  // |P^3 - M^3 H| / P^3.
  [[nodiscard]] double identity_residual() const;

  // floor(P^eta), the smoothness bound of the weight sets.
  [[nodiscard]] u64 smooth_bound() const;
};

// Sparse multiplicities, sorted by key.
struct WeightMap {
  std::vector<std::pair<u64, u64>> entries;
  u64 support_bound = 0;

  [[nodiscard]] u64 mass() const;
  [[nodiscard]] u64 at(u64 key) const;
  [[nodiscard]] bool empty() const { return entries.empty(); }
  [[nodiscard]] long double sum_of_squares() const;
};

enum class WeightMode { a, b };

// Upper limit on the number of generating tuples enumerated.
inline constexpr u64 kEnumerationBudget = 100'000'000;

// mode a: a_x over y in [P/2, P], pairs from A(P, P^eta).
// mode b: b_h over y in [H1, H2], pairs from A(H3, P^eta).
WeightMap build_weights(const ParamSet& params, WeightMode mode);

// Histogram of x^3 + y1^3 + y2^3 over x in [lo, hi] and y1, y2 in `smooth`.
WeightMap tuple_histogram(u64 lo, u64 hi, std::span<const u64> smooth);

// Number of solutions of x1^3 + y1^3 + y2^3 = x2^3 + y3^3 + y4^3 with
// x_i <= X and y_i in A(X, X^eta).
u64 mean_value_U(u64 X, double eta);

}  // namespace cubewaring::cubes
