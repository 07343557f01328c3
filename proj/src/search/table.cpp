#include <algorithm>
#include <bit>
#include <stdexcept>

#include "cubewaring/error.hpp"
#include "cubewaring/kernels.hpp"
#include "cubewaring/search.hpp"

namespace cubewaring::search {
namespace {

constexpr std::uint8_t kNone = 0xFF;
constexpr std::size_t kStripes = 64;
constexpr double kLayerBudgetBytes = 4.0 * (1ULL << 30U);

// dst[begin, end) |= (src << shift) through the active kernel. The kernel
// sees no word below its window, so the carry into dst[begin] is added here.
void shift_or(const kernels::KernelTable& kt, std::vector<u64>& dst, const std::vector<u64>& src,
              u64 shift, std::size_t begin, std::size_t end) {
  const std::size_t ws = shift >> 6U;
  const unsigned bs = shift & 63U;
  if (end <= ws) return;
  if (begin <= ws) {
    kt.shift_or(dst.data(), src.data(), end, shift);
    return;
  }
  const std::size_t o = begin - ws;
  kt.shift_or(dst.data() + o, src.data() + o, end - o, shift);
  if (bs != 0) dst[begin] |= src[begin - ws - 1] >> (64U - bs);
}

}  // namespace

bool MinimalSTable::in_layer(unsigned s, u64 n) const {
  return ((layers_[s][n >> 6U] >> (n & 63U)) & 1U) != 0;
}

std::optional<unsigned> MinimalSTable::s_min(u64 n) const {
  if (n > N_) throw ValidationError("s_min: n beyond the table");
  if (smin_[n] == kNone) return std::nullopt;
  return smin_[n];
}

SearchRecord MinimalSTable::record(u64 n) const {
  SearchRecord r;
  r.n = n;
  r.k = k_;
  r.s_min = s_min(n);
  if (!r.s_min) return r;
  u64 rest = n;
  for (unsigned s = *r.s_min; s > 0; --s) {
    // The smallest usable base; every other part of the remainder is >= it.
    bool found = false;
    for (std::size_t i = 0; i < bases_.size() && steps_[i] <= rest; ++i) {
      if (in_layer(s - 1, rest - steps_[i])) {
        r.witness.push_back(bases_[i]);
        rest -= steps_[i];
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("minimal_s_table: broken layer");
  }
  return r;
}

std::vector<SearchRecord> MinimalSTable::records(u64 lo, u64 hi) const {
  if (lo > hi || hi > N_) throw ValidationError("records: needs lo <= hi <= N");
  std::vector<SearchRecord> out;
  out.reserve(hi - lo + 1);
  for (u64 n = lo; n <= hi; ++n) out.push_back(record(n));
  return out;
}

TailReport MinimalSTable::tail(u64 lo, unsigned bound) const {
  TailReport t;
  t.lo = std::max<u64>(1, lo);
  t.hi = N_;
  t.bound = bound;
  for (u64 n = t.lo; n <= N_; ++n) {
    const std::uint8_t s = smin_[n];
    if (s == kNone || s > bound) {
      ++t.exceeding;
      if (!t.first_exceeding) t.first_exceeding = n;
    }
    if (s != kNone) t.max_s = std::max<unsigned>(t.max_s, s);
  }
  u64 n = N_;
  while (n >= 1 && smin_[n] != kNone && smin_[n] <= bound) --n;
  t.onset = n + 1;
  return t;
}

MinimalSTable minimal_s_table(unsigned k, u64 N, unsigned s_cap, const cubes::CubeCache& cache,
                              unsigned threads) {
  if (k < 1) throw ValidationError("minimal_s_table: k must be positive");
  if (N < 1 || N > (u64{1} << 32U)) throw ValidationError("minimal_s_table: needs 1 <= N <= 2^32");
  if (s_cap < 1 || s_cap > 64) throw ValidationError("minimal_s_table: needs 1 <= s_cap <= 64");
  const u64 root = core::iroot(N, k);
  if (cache.limit() < root) {
    throw ValidationError("minimal_s_table: cache limit below N^(1/k)");
  }
  const std::size_t words = static_cast<std::size_t>(N / 64 + 1);
  if (static_cast<double>(words) * 8.0 * (s_cap + 1) > kLayerBudgetBytes) {
    throw ResourceError("minimal_s_table: layers exceed the memory budget");
  }

  MinimalSTable t;
  t.N_ = N;
  t.k_ = k;
  t.cap_ = s_cap;
  for (u64 c : cache.members(root)) {
    u128 v = 0;
    core::checked_pow(c, k, v);
    if (v <= N) {
      t.bases_.push_back(c);
      t.steps_.push_back(static_cast<u64>(v));
    }
  }
  t.smin_.assign(N + 1, kNone);
  t.smin_[0] = 0;
  t.layers_.assign(1, std::vector<u64>(words, 0));
  t.layers_[0][0] = 1;
  const u64 tail_mask = (N & 63U) == 63U ? ~u64{0} : (u64{1} << ((N & 63U) + 1)) - 1;

  const auto& kt = kernels::active();
  for (unsigned s = 1; s <= s_cap; ++s) {
    std::vector<u64> next(words, 0);
    const auto& prev = t.layers_.back();
    core::parallel_chunks(words, kStripes, threads, [&](std::size_t, core::ChunkRange r) {
      for (u64 step : t.steps_) shift_or(kt, next, prev, step, r.begin, r.end);
    });
    next.back() &= tail_mask;
    for (std::size_t w = 0; w < words; ++w) {
      u64 bits = next[w];
      while (bits != 0) {
        const auto b = static_cast<unsigned>(std::countr_zero(bits));
        bits &= bits - 1;
        const u64 n = (static_cast<u64>(w) << 6U) + b;
        if (t.smin_[n] == kNone) t.smin_[n] = static_cast<std::uint8_t>(s);
      }
    }
    t.layers_.push_back(std::move(next));
  }
  return t;
}

}  // namespace cubewaring::search
