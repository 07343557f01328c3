#include <bit>
#include <limits>

#include "cubewaring/error.hpp"
#include "cubewaring/kernels.hpp"
#include "cubewaring/transform.hpp"

namespace cubewaring::transform {
namespace {

using core::u128;

// kNttPrime^-1 mod 2^64 by Newton iteration.
constexpr u64 prime_inverse() {
  u64 inv = kNttPrime;
  for (int i = 0; i < 6; ++i) inv *= 2 - kNttPrime * inv;
  return inv;
}

// Montgomery arithmetic modulo kNttPrime with R = 2^64.
struct Montgomery {
  static constexpr u64 mod = kNttPrime;
  static constexpr u64 inv = prime_inverse();
  static_assert(mod * inv == 1);
  static constexpr u64 r2 = static_cast<u64>((0 - static_cast<u128>(mod)) % mod);  // 2^128 mod p

  static constexpr u64 reduce(u128 t) {
    const u64 m = static_cast<u64>(t) * (0 - inv);
    const u128 sum = t + static_cast<u128>(m) * mod;
    u64 res = static_cast<u64>(sum >> 64U);
    // t < mod * 2^64 keeps sum < 2 * mod * 2^64, so one subtraction suffices;
    // the carry out of 128 bits cannot happen because mod < 2^62.
    if (res >= mod) res -= mod;
    return res;
  }
  static constexpr u64 to(u64 x) { return reduce(static_cast<u128>(x % mod) * r2); }
  static constexpr u64 from(u64 x) { return reduce(x); }
  static constexpr u64 mul(u64 a, u64 b) { return reduce(static_cast<u128>(a) * b); }
  static constexpr u64 add(u64 a, u64 b) {
    const u64 s = a + b;
    return s >= mod ? s - mod : s;
  }
  static constexpr u64 sub(u64 a, u64 b) { return a >= b ? a - b : a + mod - b; }
};

constexpr u64 kGenerator = 3;

u64 pow_mont(u64 base_mont, u64 exp) {
  u64 result = Montgomery::to(1);
  while (exp > 0) {
    if (exp & 1U) result = Montgomery::mul(result, base_mont);
    base_mont = Montgomery::mul(base_mont, base_mont);
    exp >>= 1U;
  }
  return result;
}

}  // namespace

void ntt(std::vector<u64>& data, bool inverse) {
  const std::size_t n = data.size();
  if (n == 0 || !std::has_single_bit(n) || n > (u64{1} << 57U)) {
    throw ValidationError("ntt: size must be a power of two up to 2^57");
  }
  for (auto& v : data) v = Montgomery::to(v);
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1U;
    for (; (j & bit) != 0; bit >>= 1U) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  const u64 g = Montgomery::to(kGenerator);
  for (std::size_t len = 2; len <= n; len <<= 1U) {
    u64 root = pow_mont(g, (kNttPrime - 1) / len);
    if (inverse) root = pow_mont(root, kNttPrime - 2);
    const std::size_t half = len / 2;
    std::vector<u64> tw(half);
    tw[0] = Montgomery::to(1);
    for (std::size_t j = 1; j < half; ++j) tw[j] = Montgomery::mul(tw[j - 1], root);
    for (std::size_t block = 0; block < n; block += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const u64 u = data[block + j];
        const u64 v = Montgomery::mul(data[block + j + half], tw[j]);
        data[block + j] = Montgomery::add(u, v);
        data[block + j + half] = Montgomery::sub(u, v);
      }
    }
  }
  if (inverse) {
    const u64 n_inv = pow_mont(Montgomery::to(n % kNttPrime), kNttPrime - 2);
    for (auto& v : data) v = Montgomery::mul(v, n_inv);
  }
  for (auto& v : data) v = Montgomery::from(v);
}

namespace {

// Σa·Σb bounds every output entry; saturates at the u128 maximum.
u128 mass_product(std::span<const u64> a, std::span<const u64> b) {
  u128 sa = 0;
  u128 sb = 0;
  for (u64 v : a) sa += v;
  for (u64 v : b) sb += v;
  if (sa != 0 && sb > std::numeric_limits<u128>::max() / sa) return std::numeric_limits<u128>::max();
  return sa * sb;
}

}  // namespace

std::vector<u64> cyclic_convolve_direct(std::span<const u64> a, std::span<const u64> b) {
  if (mass_product(a, b) > std::numeric_limits<u64>::max()) {
    throw OverflowError("cyclic_convolve: counts exceed 64 bits");
  }
  const std::size_t q = a.size();
  std::vector<u64> c(2 * q);
  for (std::size_t j = 0; j < 2 * q; ++j) c[j] = b[(q - j % q) % q];
  const auto& k = kernels::active();
  std::vector<u64> out(q);
  for (std::size_t r = 0; r < q; ++r) out[r] = k.dot_u64(a.data(), c.data() + (q - r), q);
  return out;
}

std::vector<u64> cyclic_convolve_ntt(std::span<const u64> a, std::span<const u64> b) {
  if (mass_product(a, b) >= kNttPrime) {
    throw OverflowError("cyclic_convolve: counts exceed the exact NTT range");
  }
  const std::size_t q = a.size();
  const std::size_t n = std::bit_ceil(2 * q - 1);
  std::vector<u64> fa(n, 0);
  std::vector<u64> fb(n, 0);
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  ntt(fa, false);
  ntt(fb, false);
  for (std::size_t i = 0; i < n; ++i) {
    fa[i] = static_cast<u64>(static_cast<u128>(fa[i]) * fb[i] % kNttPrime);
  }
  ntt(fa, true);
  std::vector<u64> out(q, 0);
  for (std::size_t i = 0; i < 2 * q - 1; ++i) out[i % q] += fa[i];
  return out;
}

std::vector<u64> cyclic_convolve(std::span<const u64> a, std::span<const u64> b) {
  if (a.size() != b.size() || a.empty()) {
    throw ValidationError("cyclic_convolve: operands must share a nonzero length");
  }
  if (a.size() <= kDirectCyclicLimit) return cyclic_convolve_direct(a, b);
  return cyclic_convolve_ntt(a, b);
}

core::ResidueSet cyclic_sumset(const core::ResidueSet& set, std::span<const u64> shifts) {
  const u64 m = set.modulus();
  const std::size_t words = (2 * m + 63) / 64;
  std::vector<u64> src(words, 0);
  const auto in = set.words();
  std::copy(in.begin(), in.end(), src.begin());
  std::vector<u64> acc(words, 0);
  const auto& k = kernels::active();
  for (u64 s : shifts) k.shift_or(acc.data(), src.data(), words, s % m);
  core::ResidueSet out(m);
  for (u64 r = 0; r < m; ++r) {
    const auto bit = [&](u64 i) { return ((acc[i >> 6U] >> (i & 63U)) & 1U) != 0; };
    if (bit(r) || bit(r + m)) out.insert(r);
  }
  return out;
}

}  // namespace cubewaring::transform
