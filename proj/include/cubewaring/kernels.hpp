#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference and, on
// x86-64, an AVX2 variant; the variant is chosen once at runtime. The scalar
// references use the same lane structure and operation order as the vector
// code, so the two produce bit-identical results (checked by the kernel tests).
//
// CUBEWARING_SIMD=scalar forces the reference kernels.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace cubewaring::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa = Isa::scalar;

  // Σ a[i]·b[i] modulo 2^64.
  std::uint64_t (*dot_u64)(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) = nullptr;

  // Σ a[i]·b[i] with four interleaved partial sums, combined as (s0+s1)+(s2+s3).
  double (*dot_f64)(const double* a, const double* b, std::size_t n) = nullptr;

  // Bitwise dst |= (src << shift) over `words` 64-bit words; bits shifted past
  // the end are dropped.
  void (*shift_or)(std::uint64_t* dst, const std::uint64_t* src, std::size_t words,
                   std::size_t shift) = nullptr;

  // One radix-2 decimation-in-time stage over n points with butterfly span
  // `half`; tw[j] = exp(∓2πi j / (2·half)) for j < half.
  void (*fft_stage)(std::complex<double>* data, std::size_t n, std::size_t half,
                    const std::complex<double>* tw) = nullptr;
};

bool isa_available(Isa isa);

// Kernel table for a specific ISA; throws UnsupportedError if unavailable.
const KernelTable& table(Isa isa);

// Table selected for this process (best available, unless overridden).
const KernelTable& active();

namespace detail {
const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in
}  // namespace detail

}  // namespace cubewaring::kernels
