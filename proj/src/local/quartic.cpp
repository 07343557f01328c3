#include <cmath>
#include <numeric>

#include "cubewaring/error.hpp"
#include "cubewaring/local.hpp"

namespace cubewaring::local {
namespace {

using expsums::Complex;

Complex ipow(Complex z, unsigned e) {
  Complex r = 1.0;
  while (e != 0) {
    if (e & 1U) r *= z;
    z *= z;
    e >>= 1U;
  }
  return r;
}

// (n - m) mod q without assuming n >= m.
u64 difference_mod(u64 n, u64 m, u64 q) { return (n % q + q - m % q) % q; }

}  // namespace

QuarticTerm quartic_term(u64 m, u64 n, u64 q) {
  if (q == 0) throw ValidationError("quartic_term: q must be positive");
  QuarticTerm out;
  out.q = q;
  if (q == 1) {
    out.value = 1.0;
    return out;
  }
  std::vector<u64> dense(q, 0);
  for (u64 r = 1; r <= q; ++r) ++dense[core::powmod(r, 12, q)];
  std::vector<std::pair<u64, double>> hist;
  for (u64 v = 0; v < q; ++v) {
    if (dense[v] != 0) hist.emplace_back(v, static_cast<double>(dense[v]));
  }
  const expsums::PhaseTable e(q);
  const u64 d = difference_mod(n, m, q);
  const double inv_q = 1.0 / static_cast<double>(q);
  std::vector<Complex> terms;
  std::vector<Complex> parts;
  for (u64 a = 1; a < q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    const u64 a81 = core::mulmod(81 % q, a, q);
    parts.clear();
    for (const auto& [v, c] : hist) parts.push_back(c * e[core::mulmod(a81, v, q)]);
    const Complex s = expsums::pairwise_sum(parts) * inv_q;
    terms.push_back(ipow(s, kQuarticSlots) * e[(q - core::mulmod(a, d, q)) % q]);
  }
  const Complex total = expsums::pairwise_sum(terms);
  out.value = total.real();
  out.imag_residue = std::abs(total.imag());
  return out;
}

QuarticSeries quartic_series(u64 m, u64 n, u64 Q) {
  if (Q < 1 || Q > kQuarticMaxQ) throw ValidationError("quartic_series: Q must lie in [1, 200]");
  QuarticSeries out;
  for (u64 q = 1; q <= Q; ++q) out.terms.push_back(quartic_term(m, n, q));
  // Ascending q, plain accumulation: at most 200 terms.
  for (const auto& t : out.terms) out.value += t.value;
  out.positive = out.value > 0.0;
  for (u64 p : core::sieve_primes(Q)) {
    double s = 1.0;
    for (u64 pe = p; pe <= Q; pe *= p) s += out.terms[pe - 1].value;
    out.sigma_m.emplace_back(p, s);
  }
  return out;
}

QuarticIdentity quartic_three_adic(u64 m, u64 n, unsigned h) {
  if (m % 81 != n % 81) throw ValidationError("quartic_three_adic: requires m ≡ n (mod 81)");
  if (h < 4 || h > 6) throw ValidationError("quartic_three_adic: h must lie in [4, 6]");
  QuarticIdentity out;
  out.h = h;
  u64 q = 1;
  for (unsigned l = 0; l <= h; ++l, q *= 3) out.partial_sum += quartic_term(m, n, q).value;

  u64 r = 1;
  for (unsigned i = 4; i < h; ++i) r *= 3;
  // (n - m)/81 mod r, signed.
  const u64 quotient = (n >= m ? n - m : m - n) / 81 % r;
  const u64 target = n >= m ? quotient : (r - quotient) % r;
  // x uniform on [1, 3^h] makes x^12 mod r the image of x uniform on [1, r].
  std::vector<double> slot(r, 0.0);
  for (u64 x = 1; x <= r; ++x) slot[core::powmod(x, 12, r)] += 1.0 / static_cast<double>(r);
  std::vector<double> dist(r, 0.0);
  dist[0] = 1.0;
  for (unsigned i = 0; i < kQuarticSlots; ++i) {
    std::vector<double> next(r, 0.0);
    for (u64 u = 0; u < r; ++u) {
      for (u64 v = 0; v < r; ++v) next[(u + v) % r] += dist[u] * slot[v];
    }
    dist.swap(next);
  }
  out.normalized = std::pow(3.0, h) * dist[target];
  return out;
}

}  // namespace cubewaring::local
