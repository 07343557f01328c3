#include <algorithm>
#include <cmath>

#include "cubewaring/cubes.hpp"
#include "cubewaring/error.hpp"
#include "cubewaring/smooth.hpp"

namespace cubewaring::cubes {

using core::u128;
namespace {

// Exponent of M in H = max(M^(5-1/k), M^(2^(k-1))).
Rational h_exponent(int k) {
  const Rational vaughan = Rational(5) - Rational(1, k);
  const Rational weyl = Rational(1 << (k - 1));
  return vaughan.to_double() >= weyl.to_double() ? vaughan : weyl;
}

void check_k(int k) {
  if (k < 2 || k > 4) throw ValidationError("k must be 2, 3 or 4");
}

void fill_heights(ParamSet& p) {
  p.H1 = std::cbrt(p.H / 2.0);
  p.H2 = std::cbrt(2.0 * p.H / 3.0);
  p.H3 = std::cbrt(p.H / 6.0);
}

// Integer range [ceil(lo), floor(hi)] with a small tolerance for values that
// are integers up to rounding.
std::pair<u64, u64> integer_span(double lo, double hi) {
  const double eps = 1e-9;
  const double a = std::ceil(lo - eps * std::max(1.0, std::abs(lo)));
  const double b = std::floor(hi + eps * std::max(1.0, std::abs(hi)));
  return {static_cast<u64>(std::max(a, 1.0)), static_cast<u64>(std::max(b, 0.0))};
}

u64 floor_tolerant(double v) { return integer_span(v, v).second; }

}  // namespace

Rational ParamSet::gamma_for(int k) {
  check_k(k);
  return Rational(3) / (Rational(3) + h_exponent(k));
}

int ParamSet::s_for(int k) {
  check_k(k);
  return k == 4 ? 46 : (1 << k);
}

int ParamSet::t_for(int k) {
  check_k(k);
  if (k == 2) return 4;
  return k == 3 ? 9 : 11;
}

ParamSet ParamSet::from_P(int k, double P, double eta) {
  check_k(k);
  if (!(P > 0.0)) throw ValidationError("P must be positive");
  if (!(eta > 0.0 && eta <= 0.25)) throw ValidationError("eta must lie in (0, 1/4]");
  ParamSet p;
  p.k = k;
  p.P = P;
  p.n = std::pow(P, 3.0 * k);
  p.gamma = gamma_for(k);
  p.M = core::pow_rational(P, p.gamma);
  p.H = core::pow_rational(p.M, h_exponent(k));
  fill_heights(p);
  p.eta = eta;
  p.s = s_for(k);
  p.t = t_for(k);
  return p;
}

ParamSet ParamSet::from_n(int k, double n, double eta) {
  check_k(k);
  if (!(n >= 1.0)) throw ValidationError("n must be at least 1");
  double P = std::pow(n, 1.0 / (3.0 * k));
  if (n < 1.8e19 && n == std::floor(n)) {
    const u64 ni = static_cast<u64>(n);
    const u64 r = core::iroot(ni, static_cast<unsigned>(3 * k));
    u128 back = 0;
    if (core::checked_pow(r, static_cast<unsigned>(3 * k), back) && back == ni) {
      P = static_cast<double>(r);
    }
  }
  auto p = from_P(k, P, eta);
  p.n = n;
  return p;
}

ParamSet ParamSet::toy(int k, double P, double M, double H, double eta) {
  check_k(k);
  if (!(P > 0.0 && M > 0.0 && H > 0.0)) throw ValidationError("toy parameters must be positive");
  if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError("eta must lie in (0, 1]");
  ParamSet p;
  p.k = k;
  p.P = P;
  p.n = std::pow(P, 3.0 * k);
  p.gamma = gamma_for(k);
  p.M = M;
  p.H = H;
  fill_heights(p);
  p.eta = eta;
  p.s = s_for(k);
  p.t = t_for(k);
  return p;
}

double ParamSet::identity_residual() const {
  const double p3 = P * P * P;
  return std::abs(p3 - M * M * M * H) / p3;
}

u64 ParamSet::smooth_bound() const { return floor_tolerant(std::pow(P, eta)); }

u64 WeightMap::mass() const {
  u64 total = 0;
  for (const auto& [key, mult] : entries) total += mult;
  return total;
}

u64 WeightMap::at(u64 key) const {
  const auto it = std::lower_bound(entries.begin(), entries.end(), key,
                                   [](const auto& e, u64 k) { return e.first < k; });
  return it != entries.end() && it->first == key ? it->second : 0;
}

long double WeightMap::sum_of_squares() const {
  long double total = 0;
  for (const auto& [key, mult] : entries) total += static_cast<long double>(mult) * mult;
  return total;
}

WeightMap tuple_histogram(u64 lo, u64 hi, std::span<const u64> smooth) {
  WeightMap out;
  if (lo > hi || smooth.empty()) return out;
  const u128 tuples = static_cast<u128>(hi - lo + 1) * smooth.size() * smooth.size();
  if (tuples > kEnumerationBudget) {
    throw ResourceError("weight enumeration of " + core::to_string(tuples) +
                        " tuples exceeds the budget");
  }
  // Run-length encode the pair sums once, then shift by each x^3.
  std::vector<u64> pair_sums;
  pair_sums.reserve(smooth.size() * smooth.size());
  for (u64 a : smooth) {
    for (u64 b : smooth) pair_sums.push_back(a * a * a + b * b * b);
  }
  std::sort(pair_sums.begin(), pair_sums.end());
  std::vector<std::pair<u64, u64>> pairs;
  for (u64 v : pair_sums) {
    if (!pairs.empty() && pairs.back().first == v) {
      ++pairs.back().second;
    } else {
      pairs.emplace_back(v, 1);
    }
  }
  const u64 top = hi * hi * hi + pairs.back().first;
  out.support_bound = top;
  constexpr u64 kDenseLimit = u64{1} << 25U;
  if (top <= kDenseLimit) {
    std::vector<u64> dense(top + 1, 0);
    for (u64 x = lo; x <= hi; ++x) {
      const u64 c = x * x * x;
      for (const auto& [v, m] : pairs) dense[c + v] += m;
    }
    for (u64 key = 0; key <= top; ++key) {
      if (dense[key] != 0) out.entries.emplace_back(key, dense[key]);
    }
    return out;
  }
  std::vector<std::pair<u64, u64>> all;
  all.reserve((hi - lo + 1) * pairs.size());
  for (u64 x = lo; x <= hi; ++x) {
    const u64 c = x * x * x;
    for (const auto& [v, m] : pairs) all.emplace_back(c + v, m);
  }
  std::sort(all.begin(), all.end());
  for (const auto& [key, m] : all) {
    if (!out.entries.empty() && out.entries.back().first == key) {
      out.entries.back().second += m;
    } else {
      out.entries.emplace_back(key, m);
    }
  }
  return out;
}

WeightMap build_weights(const ParamSet& params, WeightMode mode) {
  const u64 R = params.smooth_bound();
  if (R < 2) throw ValidationError("smooth bound P^eta is below 2; eta too small for this P");
  WeightMap out;
  if (mode == WeightMode::a) {
    if (params.P < 4.0) throw ValidationError("weights a_x need P >= 4");
    const auto [lo, hi] = integer_span(params.P / 2.0, params.P);
    const auto smooth = smooth::smooth_set(floor_tolerant(params.P), R);
    out = tuple_histogram(lo, hi, smooth.members);
    out.support_bound = floor_tolerant(3.0 * params.P * params.P * params.P);
  } else {
    if (params.H3 < 1.0) throw ValidationError("weights b_h need H3 >= 1");
    const auto [lo, hi] = integer_span(params.H1, params.H2);
    const auto smooth = smooth::smooth_set(floor_tolerant(params.H3), R);
    out = tuple_histogram(lo, hi, smooth.members);
    out.support_bound = floor_tolerant(params.H);
  }
  if (!out.entries.empty() && out.entries.back().first > out.support_bound) {
    throw OverflowError("weight key beyond its support bound");
  }
  return out;
}

u64 mean_value_U(u64 X, double eta) {
  if (X < 2) throw ValidationError("mean_value_U: X must be at least 2");
  const u64 R = std::max<u64>(1, floor_tolerant(std::pow(static_cast<double>(X), eta)));
  const auto smooth = smooth::smooth_set(X, R);
  const auto hist = tuple_histogram(1, X, smooth.members);
  u128 total = 0;
  for (const auto& [key, m] : hist.entries) total += static_cast<u128>(m) * m;
  if (total > std::numeric_limits<u64>::max()) throw OverflowError("U(X) exceeds 64 bits");
  return static_cast<u64>(total);
}

}  // namespace cubewaring::cubes
