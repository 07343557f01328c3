#include <algorithm>
#include <bit>
#include <cstring>
#include <limits>

#include "cubewaring/cubes.hpp"
#include "cubewaring/error.hpp"
#include "cubewaring/transform.hpp"

namespace cubewaring::cubes {
namespace {

u64 cube(u64 x) { return x * x * x; }

// Smallest x >= 0 with x^3 >= v.
u64 ceil_cbrt(u64 v) {
  if (v == 0) return 0;
  return core::iroot(v - 1, 3) + 1;
}

void put_u32le(std::uint8_t* dst, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) dst[b] = static_cast<std::uint8_t>(v >> (8 * b));
}

std::uint32_t get_u32le(const std::uint8_t* src) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(src[b]) << (8 * b);
  return v;
}

// Fills membership bits (and counts) for n in [lo, hi].
void fill_stripe(u64 lo, u64 hi, std::uint8_t* bits, std::uint8_t* counts) {
  std::vector<std::uint32_t> local(counts != nullptr ? hi - lo + 1 : 0, 0);
  for (u64 x1 = 1; 3 * cube(x1) <= hi; ++x1) {
    const u64 c1 = cube(x1);
    for (u64 x2 = x1; c1 + 2 * cube(x2) <= hi; ++x2) {
      const u64 s = c1 + cube(x2);
      u64 x3 = x2;
      if (lo > s) x3 = std::max(x3, ceil_cbrt(lo - s));
      for (; s + cube(x3) <= hi; ++x3) {
        const u64 n = s + cube(x3);
        const u64 i = n - 1;
        bits[i >> 3U] |= static_cast<std::uint8_t>(1U << (i & 7U));
        if (counts == nullptr) continue;
        std::uint32_t mult = 6;
        if (x1 == x2 && x2 == x3) {
          mult = 1;
        } else if (x1 == x2 || x2 == x3) {
          mult = 3;
        }
        auto& slot = local[n - lo];
        if (slot > std::numeric_limits<std::uint32_t>::max() - mult) {
          throw OverflowError("r3 exceeds 32 bits at n = " + std::to_string(n));
        }
        slot += mult;
      }
    }
  }
  if (counts != nullptr) {
    for (u64 n = lo; n <= hi; ++n) put_u32le(counts + 4 * (n - 1), local[n - lo]);
  }
}

}  // namespace

std::uint32_t CubeCache::r3(u64 n) const {
  if (counts_ == nullptr) throw ValidationError("cube cache holds no counts");
  if (n == 0 || n > limit_) throw ValidationError("r3: n outside the cache range");
  return get_u32le(counts_ + 4 * (n - 1));
}

u64 CubeCache::member_count() const {
  u64 total = 0;
  for (std::uint8_t b : membership_bytes()) total += static_cast<u64>(std::popcount(b));
  return total;
}

std::vector<u64> CubeCache::members(u64 upto) const {
  std::vector<u64> out;
  const u64 top = std::min(upto, limit_);
  for (u64 n = 1; n <= top; ++n) {
    if (contains(n)) out.push_back(n);
  }
  return out;
}

std::span<const std::uint8_t> CubeCache::membership_bytes() const {
  return {bits_, bits_ == nullptr ? 0 : membership_size(limit_)};
}

std::span<const std::uint8_t> CubeCache::count_bytes() const {
  return {counts_, counts_ == nullptr ? 0 : static_cast<std::size_t>(limit_) * 4};
}

CubeCache CubeCache::from_payload(u64 X, bool with_counts, const std::uint8_t* payload,
                                  std::shared_ptr<const void> owner) {
  CubeCache c;
  c.limit_ = X;
  c.bits_ = payload;
  c.counts_ = with_counts ? payload + membership_size(X) : nullptr;
  c.owner_ = std::move(owner);
  return c;
}

CubeCache build_cube_cache(u64 X, bool with_counts, unsigned threads, u64 cap) {
  if (X > cap) {
    throw ResourceError("cube cache limit " + std::to_string(X) + " exceeds the cap " +
                        std::to_string(cap));
  }
  auto buffer = std::make_shared<std::vector<std::uint8_t>>(CubeCache::payload_size(X, with_counts), 0);
  std::uint8_t* bits = buffer->data();
  std::uint8_t* counts = with_counts ? bits + CubeCache::membership_size(X) : nullptr;
  if (X >= 3) {
    // Stripes cover whole membership bytes and depend only on X.
    const u64 bytes = CubeCache::membership_size(X);
    const u64 stripe_bytes = std::max<u64>(u64{1} << 17U, (bytes + 63) / 64);
    const u64 stripes = (bytes + stripe_bytes - 1) / stripe_bytes;
    core::parallel_chunks(stripes, stripes, threads, [&](std::size_t, core::ChunkRange r) {
      for (std::size_t sidx = r.begin; sidx < r.end; ++sidx) {
        const u64 lo = 8 * (sidx * stripe_bytes) + 1;
        const u64 hi = std::min(X, 8 * std::min(bytes, (sidx + 1) * stripe_bytes));
        fill_stripe(lo, hi, bits, counts);
      }
    });
  }
  const std::uint8_t* payload = buffer->data();
  return CubeCache::from_payload(X, with_counts, payload, std::move(buffer));
}

u64 r3_direct(u64 n) {
  u64 count = 0;
  for (u64 a = 1; cube(a) < n; ++a) {
    for (u64 b = 1; cube(a) + cube(b) < n; ++b) {
      const u64 rest = n - cube(a) - cube(b);
      const u64 c = core::iroot(rest, 3);
      if (c >= 1 && cube(c) == rest) ++count;
    }
  }
  return count;
}

core::ResidueSet c_residues(u64 m) {
  if (m == 0) throw ValidationError("c_residues: modulus must be positive");
  const auto cubes = core::power_residues(3, m);
  const auto shifts = cubes.members();
  const auto two = transform::cyclic_sumset(cubes, shifts);
  return transform::cyclic_sumset(two, shifts);
}

core::ResidueSet c_residues(u64 m, const CubeCache& cache) {
  if (m == 0) throw ValidationError("c_residues: modulus must be positive");
  core::ResidueSet out(m);
  for (u64 n = 1; n <= cache.limit(); ++n) {
    if (cache.contains(n)) out.insert(n % m);
  }
  return out;
}

}  // namespace cubewaring::cubes
