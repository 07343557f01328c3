#include <complex>
#include <cstdint>

#include "cubewaring/kernels.hpp"

namespace cubewaring::kernels::detail {
namespace {

std::uint64_t dot_u64(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double dot_f64(const double* a, const double* b, std::size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) s[l] += a[i + l] * b[i + l];
  }
  for (std::size_t l = 0; i < n; ++i, ++l) s[l] += a[i] * b[i];
  return (s[0] + s[1]) + (s[2] + s[3]);
}

void shift_or(std::uint64_t* dst, const std::uint64_t* src, std::size_t words,
              std::size_t shift) {
  const std::size_t word_shift = shift / 64;
  const unsigned bit_shift = shift % 64;
  if (word_shift >= words) return;
  if (bit_shift == 0) {
    for (std::size_t i = word_shift; i < words; ++i) dst[i] |= src[i - word_shift];
    return;
  }
  dst[word_shift] |= src[0] << bit_shift;
  for (std::size_t i = word_shift + 1; i < words; ++i) {
    dst[i] |= (src[i - word_shift] << bit_shift) | (src[i - word_shift - 1] >> (64 - bit_shift));
  }
}

void fft_stage(std::complex<double>* data, std::size_t n, std::size_t half,
               const std::complex<double>* tw) {
  auto* d = reinterpret_cast<double*>(data);
  const auto* w = reinterpret_cast<const double*>(tw);
  for (std::size_t block = 0; block < n; block += 2 * half) {
    for (std::size_t j = 0; j < half; ++j) {
      double* u = d + 2 * (block + j);
      double* v = d + 2 * (block + j + half);
      const double wr = w[2 * j];
      const double wi = w[2 * j + 1];
      const double tr = v[0] * wr - v[1] * wi;
      const double ti = v[1] * wr + v[0] * wi;
      const double ur = u[0];
      const double ui = u[1];
      u[0] = ur + tr;
      u[1] = ui + ti;
      v[0] = ur - tr;
      v[1] = ui - ti;
    }
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{Isa::scalar, &dot_u64, &dot_f64, &shift_or, &fft_stage};
  return t;
}

}  // namespace cubewaring::kernels::detail
