#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>

#include "cubewaring/error.hpp"
#include "cubewaring/expsums.hpp"
#include "cubewaring/transform.hpp"

namespace cubewaring::expsums {
namespace {

struct PrimePowerEntry {
  u64 p = 0;
  unsigned e = 0;
  u64 m = 0;
};

std::vector<PrimePowerEntry> prime_powers_upto(u64 limit) {
  std::vector<PrimePowerEntry> out;
  if (limit < 2) return out;
  for (u64 p : core::sieve_primes(limit)) {
    u64 m = p;
    for (unsigned e = 1;; ++e) {
      out.push_back({p, e, m});
      if (m > limit / p) break;
      m *= p;
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.m < y.m; });
  return out;
}

std::vector<u64> smallest_prime_factors(u64 limit) {
  std::vector<u64> spf(limit + 1, 0);
  for (u64 i = 2; i <= limit; ++i) {
    if (spf[i] != 0) continue;
    for (u64 j = i; j <= limit; j += i) {
      if (spf[j] == 0) spf[j] = i;
    }
  }
  return spf;
}

// Representatives of the units mod m modulo the subgroup {u^d}. `visit(a)`
// is called once per coset; m >= 2.
template <class Visit>
void for_each_coset(u64 m, unsigned d, Visit visit) {
  std::vector<u64> sub;
  std::vector<char> in_sub(m, 0);
  for (u64 u = 1; u < m; ++u) {
    if (std::gcd(u, m) != 1) continue;
    const u64 w = core::powmod(u, d, m);
    if (!in_sub[w]) {
      in_sub[w] = 1;
      sub.push_back(w);
    }
  }
  std::vector<char> covered(m, 0);
  for (u64 a = 1; a < m; ++a) {
    if (covered[a] || std::gcd(a, m) != 1) continue;
    visit(a);
    for (u64 w : sub) covered[core::mulmod(a, w, m)] = 1;
  }
}

// max over q <= q_max of the product of per-prime-power maxima.
std::pair<double, u64> combine(const std::vector<double>& pp_max, u64 q_max) {
  const auto spf = smallest_prime_factors(q_max);
  double best = 1.0;
  u64 arg = 1;
  for (u64 q = 2; q <= q_max; ++q) {
    double ratio = 1.0;
    u64 rest = q;
    while (rest > 1) {
      const u64 p = spf[rest];
      u64 pe = 1;
      while (rest % p == 0) {
        rest /= p;
        pe *= p;
      }
      ratio *= pp_max[pe];
    }
    if (ratio > best) {
      best = ratio;
      arg = q;
    }
  }
  return {best, arg};
}

// q^{-1} max_a |S_k(q,a)| / τ_k(q) for a prime power q.
double gauss_prime_power_max(const PrimePowerEntry& pp, unsigned k) {
  const u64 m = pp.m;
  std::vector<u64> dense(m, 0);
  for (u64 r = 0; r < m; ++r) ++dense[core::powmod(r, k, m)];
  std::vector<std::pair<u64, double>> hist;
  for (u64 v = 0; v < m; ++v) {
    if (dense[v] != 0) hist.emplace_back(v, static_cast<double>(dense[v]));
  }
  const PhaseTable e(m);
  const double tau = tau_weight(core::FactoredInteger{m, {{pp.p, pp.e}}}, static_cast<int>(k));
  double best = 0.0;
  std::vector<Complex> parts;
  for_each_coset(m, k, [&](u64 a) {
    parts.clear();
    for (const auto& [v, c] : hist) parts.push_back(c * e[core::mulmod(a, v, m)]);
    best = std::max(best, std::abs(pairwise_sum(parts)));
  });
  return best / static_cast<double>(m) / tau;
}

// max over (a, b, C) of |S_y(m, a, b)| for a prime power m.
double shifted_prime_power_max(const PrimePowerEntry& pp, unsigned k, bool exhaustive,
                               unsigned samples, std::mt19937_64& rng) {
  const u64 m = pp.m;
  const PhaseTable e(m);
  std::vector<u64> g(m);
  const auto fill = [&](u64 a, u64 C) {
    for (u64 r = 0; r < m; ++r) {
      const u64 v = (core::powmod(r, 3, m) + C) % m;
      g[r] = core::mulmod(a, core::powmod(v, k, m), m);
    }
  };
  double best = 0.0;
  if (exhaustive) {
    // S(a, b, C) = S(a u^{3k}, b u, C u^{-3}): one a per coset of 3k-th powers.
    for_each_coset(m, 3 * k, [&](u64 a) {
      for (u64 C = 0; C < m; ++C) {
        fill(a, C);
        for (u64 b = 0; b < m; ++b) {
          Complex s = 0;
          u64 br = 0;
          for (u64 r = 0; r < m; ++r) {
            s += e[(g[r] + br) % m];
            br += b;
            if (br >= m) br -= m;
          }
          best = std::max(best, std::abs(s));
        }
      }
    });
    return best;
  }
  std::uniform_int_distribution<u64> pick(0, m - 1);
  std::vector<Complex> x(m);
  for (unsigned i = 0; i < samples; ++i) {
    u64 a = 0;
    do {
      a = pick(rng);
    } while (std::gcd(a, m) != 1);
    fill(a, pick(rng));
    for (u64 r = 0; r < m; ++r) x[r] = e[g[r]];
    for (const auto& z : transform::dft(x, true)) best = std::max(best, std::abs(z));
  }
  return best;
}

}  // namespace

BoundScan gauss_bound_scan(unsigned k, u64 q_max, unsigned threads) {
  if (k < 2 || k > 4) throw ValidationError("gauss_bound_scan: k must be 2, 3 or 4");
  if (q_max < 1 || q_max > 1'000'000) throw ValidationError("gauss_bound_scan: q_max in [1, 10^6]");
  const auto pps = prime_powers_upto(q_max);
  std::vector<double> per(pps.size());
  core::parallel_chunks(pps.size(), std::min<std::size_t>(pps.size(), 64), threads,
                        [&](std::size_t, core::ChunkRange r) {
                          for (std::size_t i = r.begin; i < r.end; ++i) {
                            per[i] = gauss_prime_power_max(pps[i], k);
                          }
                        });
  std::vector<double> dense(q_max + 1, 0.0);
  BoundScan out;
  out.k = k;
  out.q_max = q_max;
  for (std::size_t i = 0; i < pps.size(); ++i) {
    dense[pps[i].m] = per[i];
    out.prime_power_max.emplace_back(pps[i].m, per[i]);
  }
  std::tie(out.max_ratio, out.argmax_q) = combine(dense, q_max);
  return out;
}

double gauss_bound_brute(unsigned k, u64 q_max) {
  double best = 0.0;
  for (u64 q = 1; q <= q_max; ++q) {
    std::vector<u64> dense(q, 0);
    for (u64 r = 0; r < q; ++r) ++dense[core::powmod(r, k, q)];
    const PhaseTable e(q);
    const double tau = tau_weight(core::factorize(q), static_cast<int>(k));
    for (u64 a = 0; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      Complex s = 0;
      for (u64 v = 0; v < q; ++v) s += static_cast<double>(dense[v]) * e[core::mulmod(a, v, q)];
      best = std::max(best, std::abs(s) / static_cast<double>(q) / tau);
    }
  }
  return best;
}

ShiftedScan shifted_bound_scan(unsigned k, u64 q_max, u64 exhaustive_limit, unsigned samples,
                               u64 seed) {
  if (k < 2 || k > 4) throw ValidationError("shifted_bound_scan: k must be 2, 3 or 4");
  if (q_max < 1 || q_max > 100'000) throw ValidationError("shifted_bound_scan: q_max in [1, 10^5]");
  const auto pps = prime_powers_upto(q_max);
  std::mt19937_64 rng(seed);
  std::vector<double> dense(q_max + 1, 0.0);
  for (const auto& pp : pps) {
    const double s = shifted_prime_power_max(pp, k, pp.m <= exhaustive_limit, samples, rng);
    const double w = w_weight(core::FactoredInteger{pp.m, {{pp.p, pp.e}}}, static_cast<int>(k));
    dense[pp.m] = s / (std::pow(static_cast<double>(pp.m), 1.01) * w);
  }
  ShiftedScan out;
  out.k = k;
  out.q_max = q_max;
  out.exhaustive_limit = exhaustive_limit;
  std::tie(out.max_ratio, out.argmax_q) = combine(dense, q_max);
  return out;
}

MinorArcReport minor_arc_report(const cubes::ParamSet& params, std::size_t samples, u64 seed) {
  const auto primes = core::primes_in_range(params.M / 2.0, params.M);
  if (primes.empty()) throw ValidationError("minor_arc_report: no primes in [M/2, M]");
  const auto b = cubes::build_weights(params, cubes::WeightMode::b);
  if (b.empty()) throw ValidationError("minor_arc_report: the weights b_h are empty");
  const auto W = Generator::W(b, primes, static_cast<unsigned>(params.k));
  const auto scheme = ArcScheme::script_M(params);
  const double Y = std::pow(params.M, params.k);
  const double HM = params.H * params.M;
  const double decay = std::pow(params.M, 3.0 * params.k) * std::pow(params.H, params.k);
  const double l2 = std::sqrt(static_cast<double>(b.sum_of_squares()));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  MinorArcReport out;
  double total = 0.0;
  for (std::size_t attempt = 0; out.minor < samples && attempt < 100 * samples; ++attempt) {
    const double alpha = unif(rng);
    ++out.samples;
    if (locate_arc(alpha, scheme).inside) continue;
    const auto d = dirichlet_approx(alpha, Y);
    const double tau = tau_weight(core::factorize(d.q), params.k);
    const double rhs =
        10.0 * std::sqrt(HM + tau * HM * params.M / (1.0 + decay * std::abs(d.beta))) * l2;
    const double ratio = std::abs(W(alpha)) / rhs;
    out.max_ratio = std::max(out.max_ratio, ratio);
    total += ratio;
    ++out.minor;
  }
  out.mean_ratio = out.minor > 0 ? total / static_cast<double>(out.minor) : 0.0;
  return out;
}

}  // namespace cubewaring::expsums
