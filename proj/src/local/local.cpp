#include <algorithm>
#include <cmath>
#include <numeric>

#include "cubewaring/error.hpp"
#include "cubewaring/local.hpp"
#include "cubewaring/transform.hpp"

namespace cubewaring::local {
namespace {

u64 prime_power(u64 p, unsigned h) {
  u128 m = 0;
  if (!core::checked_pow(p, h, m) || m > kMaxCountModulus) {
    throw ResourceError("modulus " + std::to_string(p) + "^" + std::to_string(h) +
                        " exceeds the counting limit 10^6");
  }
  return static_cast<u64>(m);
}

void check_prime(u64 p) {
  if (!core::is_prime(p)) throw ValidationError(std::to_string(p) + " is not prime");
}

// (x^3 + C)^k mod m for x in [1, m], sparse.
std::vector<std::pair<u64, u64>> slot_histogram(u64 C, unsigned k, u64 m, u64 p, bool unit) {
  std::vector<u64> dense(m, 0);
  for (u64 x = 1; x <= m; ++x) {
    const u64 t = (core::mulmod(core::mulmod(x, x, m), x, m) + C) % m;
    if (unit && (x % p == 0 || t % p == 0)) continue;
    ++dense[core::powmod(t, k, m)];
  }
  std::vector<std::pair<u64, u64>> out;
  for (u64 v = 0; v < m; ++v) {
    if (dense[v] != 0) out.emplace_back(v, dense[v]);
  }
  return out;
}

}  // namespace

unsigned gamma_depth(u64 p, unsigned k) {
  unsigned tau = 0;
  for (u64 r = 3ULL * k; r % p == 0; r /= p) ++tau;
  return 2 * tau + 1;
}

TSets t_sets(u64 C, u64 modulus, unsigned k) {
  if (modulus < 2) throw ValidationError("t_sets: modulus must be a prime power >= 2");
  const auto f = core::factorize(modulus);
  if (f.factors.size() != 1) throw ValidationError("t_sets: modulus must be a prime power");
  const u64 p = f.factors.front().p;
  TSets out{core::ResidueSet(modulus), core::ResidueSet(modulus), core::ResidueSet(modulus)};
  const u64 c = C % modulus;
  for (u64 x = 1; x <= modulus; ++x) {
    const u64 t = (core::powmod(x, 3, modulus) + c) % modulus;
    out.T.insert(t);
    if (x % p != 0 && t % p != 0) out.T_star.insert(t);
    out.T_k.insert(core::powmod(t, k, modulus));
  }
  return out;
}

u128 count_solutions_mod(std::span<const Slot> slots, unsigned k, u64 n, u64 p, unsigned h,
                         bool unit_first) {
  if (k < 1) throw ValidationError("count_solutions_mod: k must be positive");
  check_prime(p);
  if (h == 0) return 1;
  const u64 m = prime_power(p, h);
  if (slots.empty()) return n % m == 0 ? 1 : 0;
  if (static_cast<double>(slots.size()) * std::log2(static_cast<double>(m)) > 126.0) {
    throw OverflowError("count_solutions_mod: (p^h)^s' exceeds 128 bits");
  }
  std::vector<std::vector<std::pair<u64, u64>>> hist;
  hist.reserve(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    hist.push_back(slot_histogram(expsums::slot_shift_mod(slots[i], m), k, m, p, unit_first && i == 0));
  }
  // Rough operation count: the running distribution fills up quickly.
  u64 ops = 0;
  for (std::size_t i = 1; i + 1 < hist.size(); ++i) ops += m * hist[i].size();
  if (ops > kCountBudget) throw ResourceError("count_solutions_mod: convolution budget exceeded");

  std::vector<u128> dist(m, 0);
  for (const auto& [v, c] : hist[0]) dist[v] += c;
  std::vector<u128> next(m);
  for (std::size_t i = 1; i + 1 < hist.size(); ++i) {
    std::fill(next.begin(), next.end(), 0);
    for (u64 u = 0; u < m; ++u) {
      const u128 d = dist[u];
      if (d == 0) continue;
      for (const auto& [v, c] : hist[i]) {
        const u64 w = u + v >= m ? u + v - m : u + v;
        next[w] += d * c;
      }
    }
    dist.swap(next);
  }
  const u64 target = n % m;
  if (hist.size() == 1) return dist[target];
  u128 total = 0;
  for (const auto& [v, c] : hist.back()) total += dist[(target + m - v) % m] * c;
  return total;
}

LocalFactor sigma_p(u64 p, std::span<const Slot> slots, u64 n, unsigned k,
                    const DepthPolicy& policy) {
  check_prime(p);
  if (slots.empty()) throw ValidationError("sigma_p: at least one slot is required");
  const unsigned start = policy.start == 0 ? gamma_depth(p, k) : policy.start;
  LocalFactor out;
  out.p = p;
  bool have = false;
  for (unsigned h = start;; ++h) {
    u128 mp = 0;
    if (!core::checked_pow(p, h, mp) || mp > policy.cap_modulus || mp > kMaxCountModulus) break;
    u128 count = 0;
    try {
      count = count_solutions_mod(slots, k, n, p, h);
    } catch (const ResourceError&) {
      break;
    } catch (const OverflowError&) {
      break;
    }
    const long double m = static_cast<long double>(mp);
    const auto value = static_cast<double>(static_cast<long double>(count) /
                                           std::pow(m, static_cast<long double>(slots.size() - 1)));
    if (have) {
      const double scale = std::max(std::abs(value), std::abs(out.value));
      if (std::abs(value - out.value) <= policy.tolerance * scale) {
        out.h = h;
        out.value = value;
        out.stabilized = true;
        return out;
      }
    }
    out.h = h;
    out.value = value;
    have = true;
  }
  if (!have) {
    throw ResourceError("sigma_p: depth " + std::to_string(start) + " at p = " + std::to_string(p) +
                        " is beyond the counting budget");
  }
  return out;
}

SeriesResult singular_series(std::span<const Slot> slots, u64 n, unsigned k, u64 Q,
                             unsigned threads, const DepthPolicy& policy) {
  if (slots.empty()) throw ValidationError("singular_series: at least one slot is required");
  const auto primes = core::sieve_primes(Q);
  SeriesResult out;
  out.tail_exponent = static_cast<double>(slots.size() - 1) / (3.0 * k) - 1.0;
  out.factors.resize(primes.size());
  core::parallel_chunks(primes.size(), primes.size(), threads, [&](std::size_t, core::ChunkRange r) {
    for (std::size_t i = r.begin; i < r.end; ++i) out.factors[i] = sigma_p(primes[i], slots, n, k, policy);
  });
  out.value = 1.0;
  for (const auto& f : out.factors) out.value *= f.value;
  return out;
}

LocalConditions check_local_conditions(std::span<const Slot> slots, unsigned k) {
  LocalConditions out;
  out.k = k;
  switch (k) {
    case 2:
      out.residue = 28;
      out.modulus = 108;
      break;
    case 3:
      out.residue = 0;
      out.modulus = 162;
      break;
    case 4:
      throw UnsupportedError("local conditions are only defined for k = 2, 3");
    default:
      throw ValidationError("check_local_conditions: k must be 2 or 3");
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (expsums::slot_shift_mod(slots[i], out.modulus) != out.residue) out.failing.push_back(i);
  }
  out.ok = out.failing.empty();
  return out;
}

bool Solubility::all() const { return std::all_of(soluble.begin(), soluble.end(), [](bool b) { return b; }); }

Solubility congruence_soluble(unsigned exponent, unsigned vars, u64 modulus, bool unit_first) {
  if (modulus < 1 || modulus > 10'000) throw ValidationError("congruence_soluble: modulus in [1, 10^4]");
  if (vars < 1) throw ValidationError("congruence_soluble: at least one variable");
  Solubility out;
  out.modulus = modulus;
  if (modulus == 1) {
    out.soluble.assign(1, true);
    return out;
  }
  const auto rest = core::power_residues(exponent, modulus);
  auto cur = core::power_residues(exponent, modulus, unit_first);
  const auto shifts = rest.members();
  for (unsigned i = 1; i < vars; ++i) {
    auto next = transform::cyclic_sumset(cur, shifts);
    if (next == cur) break;
    cur = std::move(next);
  }
  out.soluble.resize(modulus);
  for (u64 r = 0; r < modulus; ++r) out.soluble[r] = cur.contains(r);
  return out;
}

}  // namespace cubewaring::local
