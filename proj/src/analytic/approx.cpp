#include <cmath>
#include <map>
#include <numeric>

#include "cubewaring/analytic.hpp"
#include "cubewaring/error.hpp"
#include "cubewaring/expsums.hpp"
#include "cubewaring/smooth.hpp"

namespace cubewaring::analytic {
namespace {

// Multiplicities of C = y1^3 + y2^3 over ordered pairs from `ys`.
std::map<u64, u64> pair_shifts(const std::vector<u64>& ys) {
  std::map<u64, u64> out;
  for (u64 a : ys) {
    for (u64 b : ys) ++out[a * a * a + b * b * b];
  }
  return out;
}

}  // namespace

ApproxResult eval_major_approx(ApproxMode mode, double alpha, u64 a, u64 q,
                               const cubes::ParamSet& params) {
  if (q == 0 || std::gcd(a, q) != 1) throw ValidationError("eval_major_approx: needs (a, q) = 1");
  const double beta = alpha - static_cast<double>(a) / static_cast<double>(q);
  const u64 R = params.smooth_bound();
  const auto k = static_cast<unsigned>(params.k);
  ApproxResult out;
  std::vector<Complex> terms;
  if (mode == ApproxMode::V) {
    const auto ys = smooth::smooth_set(static_cast<u64>(std::floor(params.P)), R);
    for (const auto& [C, mult] : pair_shifts(ys.members)) {
      const auto v = v_integral(VMode::plain, beta, static_cast<double>(C), 1, params);
      out.accurate = out.accurate && v.accurate;
      terms.push_back(static_cast<double>(mult) * expsums::cube_shift_sum(q, a, C, k) * v.value);
    }
  } else {
    const auto ys = smooth::smooth_set(static_cast<u64>(std::floor(params.H3)), R);
    const auto primes = core::primes_in_range(params.M / 2.0, params.M);
    const auto shifts = pair_shifts(ys.members);
    for (u64 p : primes) {
      out.prime_divides_q = out.prime_divides_q || q % p == 0;
      for (const auto& [C, mult] : shifts) {
        const auto v = v_integral(VMode::scaled, beta, static_cast<double>(C), p, params);
        out.accurate = out.accurate && v.accurate;
        const u64 C_eff = expsums::slot_shift_mod({C, p}, q);
        terms.push_back(static_cast<double>(mult) * expsums::cube_shift_sum(q, a, C_eff, k) * v.value);
      }
    }
  }
  out.value = expsums::pairwise_sum(terms) / static_cast<double>(q);
  return out;
}

Complex w_beta(double beta, u64 n, double P, double eta) {
  if (!(P > 1.0) || !(eta > 0.0)) throw ValidationError("w_beta: needs P > 1 and eta > 0");
  const double lower = std::pow(P, 12.0 * eta);
  if (!(lower < static_cast<double>(n))) throw ValidationError("w_beta: needs P^{12 eta} < n");
  const double denom = 12.0 * eta * std::log(P);
  const auto& rho = smooth::RhoTable::shared();
  if (std::log(static_cast<double>(n)) / denom > rho.x_max()) {
    throw ValidationError("w_beta: log n/(12 eta log P) beyond the rho table");
  }
  const u64 first = static_cast<u64>(std::floor(lower)) + 1;
  constexpr u64 kBlock = 4096;
  std::vector<Complex> blocks;
  std::vector<Complex> terms;
  terms.reserve(kBlock);
  for (u64 start = first; start <= n; start += kBlock) {
    const u64 end = std::min(n, start + kBlock - 1);
    terms.clear();
    for (u64 x = start; x <= end; ++x) {
      const double xd = static_cast<double>(x);
      const double weight = std::pow(xd, -11.0 / 12.0) * rho(std::log(xd) / denom) / 12.0;
      terms.push_back(weight * expsums::exact_phase(beta, x));
    }
    blocks.push_back(expsums::pairwise_sum(terms));
  }
  return expsums::pairwise_sum(blocks);
}

}  // namespace cubewaring::analytic
