#pragma once

// Convolution machinery over Z/q (exact integer and floating point), real
// linear convolution for density grids, and cyclic boolean sumsets.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "cubewaring/core.hpp"

namespace cubewaring::transform {

using core::u64;

// In-place complex FFT; size must be a power of two. The inverse is scaled
// by 1/n.
void fft(std::vector<std::complex<double>>& data, bool inverse);

// In-place number-theoretic transform modulo kNttPrime.
inline constexpr u64 kNttPrime = 4179340454199820289ULL;  // 29 * 2^57 + 1
void ntt(std::vector<u64>& data, bool inverse);

// Length-n DFT for any n (Bluestein chirp over a power-of-two FFT):
// out[b] = Σ_r x[r]·e(±br/n), sign + when `positive`.
std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x, bool positive);

// Full linear convolution (length |a| + |b| - 1) via FFT.
std::vector<double> linear_convolve(std::span<const double> a, std::span<const double> b);

// Cyclic convolution over Z/q where q = |a| = |b|:
// out[r] = Σ_i a[i]·b[(r - i) mod q].
// The integer form is exact; it throws OverflowError when Σa·Σb could exceed
// the exact range of the chosen route.
std::vector<u64> cyclic_convolve(std::span<const u64> a, std::span<const u64> b);
std::vector<double> cyclic_convolve(std::span<const double> a, std::span<const double> b);

// Sizes at or below this use the direct O(q^2) kernel route.
inline constexpr std::size_t kDirectCyclicLimit = 4096;

std::vector<u64> cyclic_convolve_direct(std::span<const u64> a, std::span<const u64> b);
std::vector<u64> cyclic_convolve_ntt(std::span<const u64> a, std::span<const u64> b);
std::vector<double> cyclic_convolve_direct(std::span<const double> a, std::span<const double> b);
std::vector<double> cyclic_convolve_fft(std::span<const double> a, std::span<const double> b);

// {a + s mod m : a in set, s in shifts}.
core::ResidueSet cyclic_sumset(const core::ResidueSet& set, std::span<const u64> shifts);

}  // namespace cubewaring::transform
