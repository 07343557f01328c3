#include <bit>
#include <cmath>
#include <numbers>

#include "cubewaring/error.hpp"
#include "cubewaring/kernels.hpp"
#include "cubewaring/transform.hpp"

namespace cubewaring::transform {
namespace {

void bit_reverse(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1U;
    for (; (j & bit) != 0; bit >>= 1U) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
}

}  // namespace

void fft(std::vector<std::complex<double>>& data, bool inverse) {
  const std::size_t n = data.size();
  if (n == 0 || !std::has_single_bit(n)) throw ValidationError("fft: size must be a power of two");
  bit_reverse(data);
  const auto& k = kernels::active();
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<std::complex<double>> tw(n / 2 > 0 ? n / 2 : 1);
  for (std::size_t half = 1; half < n; half <<= 1U) {
    const double step = sign * std::numbers::pi / static_cast<double>(half);
    for (std::size_t j = 0; j < half; ++j) {
      const double angle = step * static_cast<double>(j);
      tw[j] = {std::cos(angle), std::sin(angle)};
    }
    k.fft_stage(data.data(), n, half, tw.data());
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : data) v *= scale;
  }
}

std::vector<double> linear_convolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t n = std::bit_ceil(out_len);
  // Pack a into the real part and b into the imaginary part; one forward
  // transform yields both spectra.
  std::vector<std::complex<double>> z(n);
  for (std::size_t i = 0; i < a.size(); ++i) z[i].real(a[i]);
  for (std::size_t i = 0; i < b.size(); ++i) z[i].imag(b[i]);
  fft(z, false);
  std::vector<std::complex<double>> prod(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (n - i) & (n - 1);
    const auto zi = z[i];
    const auto zj = std::conj(z[j]);
    const auto fa = (zi + zj) * 0.5;
    const auto fb = (zi - zj) * std::complex<double>(0.0, -0.5);
    prod[i] = fa * fb;
  }
  fft(prod, true);
  std::vector<double> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) out[i] = prod[i].real();
  return out;
}

std::vector<double> cyclic_convolve_fft(std::span<const double> a, std::span<const double> b) {
  const std::size_t q = a.size();
  auto lin = linear_convolve(a, b);
  std::vector<double> out(q, 0.0);
  for (std::size_t i = 0; i < lin.size(); ++i) out[i % q] += lin[i];
  return out;
}

std::vector<double> cyclic_convolve_direct(std::span<const double> a, std::span<const double> b) {
  const std::size_t q = a.size();
  // c[j] = b[(-j) mod q] over two periods, so b[(r - i) mod q] = c[i + q - r].
  std::vector<double> c(2 * q);
  for (std::size_t j = 0; j < 2 * q; ++j) c[j] = b[(q - j % q) % q];
  const auto& k = kernels::active();
  std::vector<double> out(q);
  for (std::size_t r = 0; r < q; ++r) out[r] = k.dot_f64(a.data(), c.data() + (q - r), q);
  return out;
}

std::vector<double> cyclic_convolve(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw ValidationError("cyclic_convolve: operands must share a nonzero length");
  }
  if (a.size() <= kDirectCyclicLimit) return cyclic_convolve_direct(a, b);
  return cyclic_convolve_fft(a, b);
}

}  // namespace cubewaring::transform

namespace cubewaring::transform {

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x, bool positive) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  if (std::has_single_bit(n)) {
    std::vector<std::complex<double>> v(x.begin(), x.end());
    fft(v, positive);
    if (positive) {
      for (auto& z : v) z *= static_cast<double>(n);
    }
    return v;
  }
  // br = (b^2 + r^2 - (b - r)^2) / 2; chirp angles use j^2 mod 2n to stay exact.
  const double sign = positive ? 1.0 : -1.0;
  const auto chirp = [&](std::size_t j) {
    const auto jj = static_cast<std::size_t>((static_cast<unsigned __int128>(j) * j) % (2 * n));
    const double angle = sign * std::numbers::pi * static_cast<double>(jj) / static_cast<double>(n);
    return std::complex<double>(std::cos(angle), std::sin(angle));
  };
  const std::size_t m = std::bit_ceil(2 * n - 1);
  std::vector<std::complex<double>> a(m);
  std::vector<std::complex<double>> b(m);
  for (std::size_t r = 0; r < n; ++r) a[r] = x[r] * chirp(r);
  b[0] = std::conj(chirp(0));
  for (std::size_t j = 1; j < n; ++j) b[j] = b[m - j] = std::conj(chirp(j));
  fft(a, false);
  fft(b, false);
  for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
  fft(a, true);
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp(k);
  return out;
}

}  // namespace cubewaring::transform
