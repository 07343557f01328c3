// Compiled with -mavx2 only; never called unless the CPU reports AVX2.

#include <immintrin.h>

#include <complex>
#include <cstdint>

#include "cubewaring/kernels.hpp"

namespace cubewaring::kernels::detail {
namespace {

// Low 64 bits of a 64x64 product per lane, built from 32x32->64 multiplies.
inline __m256i mullo_epi64(__m256i a, __m256i b) {
  const __m256i lo = _mm256_mul_epu32(a, b);
  const __m256i a_hi = _mm256_srli_epi64(a, 32);
  const __m256i b_hi = _mm256_srli_epi64(b, 32);
  const __m256i cross = _mm256_add_epi64(_mm256_mul_epu32(a_hi, b), _mm256_mul_epu32(a, b_hi));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

std::uint64_t dot_u64(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    acc = _mm256_add_epi64(acc, mullo_epi64(va, vb));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

double dot_f64(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, prod);
  }
  alignas(32) double s[4];
  _mm256_store_pd(s, acc);
  for (std::size_t l = 0; i < n; ++i, ++l) s[l] += a[i] * b[i];
  return (s[0] + s[1]) + (s[2] + s[3]);
}

void shift_or(std::uint64_t* dst, const std::uint64_t* src, std::size_t words,
              std::size_t shift) {
  const std::size_t word_shift = shift / 64;
  const unsigned bit_shift = shift % 64;
  if (word_shift >= words) return;
  std::size_t i = word_shift;
  if (bit_shift == 0) {
    for (; i + 4 <= words; i += 4) {
      const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i - word_shift));
      auto* out = reinterpret_cast<__m256i*>(dst + i);
      _mm256_storeu_si256(out, _mm256_or_si256(_mm256_loadu_si256(out), s));
    }
    for (; i < words; ++i) dst[i] |= src[i - word_shift];
    return;
  }
  dst[i] |= src[0] << bit_shift;
  ++i;
  const __m128i left = _mm_cvtsi32_si128(static_cast<int>(bit_shift));
  const __m128i right = _mm_cvtsi32_si128(static_cast<int>(64 - bit_shift));
  for (; i + 4 <= words; i += 4) {
    const std::uint64_t* base = src + (i - word_shift);
    const __m256i cur = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(base));
    const __m256i prev = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(base - 1));
    const __m256i v = _mm256_or_si256(_mm256_sll_epi64(cur, left), _mm256_srl_epi64(prev, right));
    auto* out = reinterpret_cast<__m256i*>(dst + i);
    _mm256_storeu_si256(out, _mm256_or_si256(_mm256_loadu_si256(out), v));
  }
  for (; i < words; ++i) {
    dst[i] |= (src[i - word_shift] << bit_shift) | (src[i - word_shift - 1] >> (64 - bit_shift));
  }
}

// (v * w) for two packed complex numbers, matching the scalar operation order.
inline __m256d cmul(__m256d v, __m256d w) {
  const __m256d wr = _mm256_movedup_pd(w);
  const __m256d wi = _mm256_permute_pd(w, 0xF);
  const __m256d t1 = _mm256_mul_pd(v, wr);
  const __m256d t2 = _mm256_mul_pd(_mm256_permute_pd(v, 0x5), wi);
  return _mm256_addsub_pd(t1, t2);
}

void fft_stage(std::complex<double>* data, std::size_t n, std::size_t half,
               const std::complex<double>* tw) {
  auto* d = reinterpret_cast<double*>(data);
  const auto* w = reinterpret_cast<const double*>(tw);
  if (half < 2) {
    detail::scalar_table().fft_stage(data, n, half, tw);
    return;
  }
  for (std::size_t block = 0; block < n; block += 2 * half) {
    for (std::size_t j = 0; j < half; j += 2) {
      double* u = d + 2 * (block + j);
      double* v = d + 2 * (block + j + half);
      const __m256d t = cmul(_mm256_loadu_pd(v), _mm256_loadu_pd(w + 2 * j));
      const __m256d uu = _mm256_loadu_pd(u);
      _mm256_storeu_pd(u, _mm256_add_pd(uu, t));
      _mm256_storeu_pd(v, _mm256_sub_pd(uu, t));
    }
  }
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable t{Isa::avx2, &dot_u64, &dot_f64, &shift_or, &fft_stage};
  return &t;
}

}  // namespace cubewaring::kernels::detail
