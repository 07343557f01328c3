#include <algorithm>
#include <bit>
#include <complex>
#include <limits>

#include "cubewaring/error.hpp"
#include "cubewaring/search.hpp"
#include "cubewaring/transform.hpp"

namespace cubewaring::search {
namespace {

using Term = expsums::Generator::Term;
using Histogram = std::vector<Term>;

constexpr std::size_t kMaxFourierNodes = std::size_t{1} << 24U;

u64 checked_mul(u64 a, u64 b) {
  u64 out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw OverflowError("rep_count: count exceeds 64 bits");
  return out;
}

u64 checked_add(u64 a, u64 b) {
  u64 out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw OverflowError("rep_count: count exceeds 64 bits");
  return out;
}

Histogram sorted_terms(const expsums::Generator& g) {
  Histogram h = g.terms();
  std::sort(h.begin(), h.end(), [](const Term& a, const Term& b) { return a.value < b.value; });
  Histogram out;
  for (const Term& t : h) {
    if (!out.empty() && out.back().value == t.value) {
      out.back().mult = checked_add(out.back().mult, t.mult);
    } else {
      out.push_back(t);
    }
  }
  return out;
}

// Pairwise sums not above `cap`, merged by value.
Histogram convolve(const Histogram& a, const Histogram& b, u128 cap) {
  u64 count = 0;
  for (const Term& x : a) {
    if (x.value > cap) break;
    count += static_cast<u64>(std::upper_bound(b.begin(), b.end(), cap - x.value,
                                               [](u128 v, const Term& y) { return v < y.value; }) -
                              b.begin());
    if (count > kHistogramBudget) throw ResourceError("rep_count: histogram budget exceeded");
  }
  Histogram pairs;
  pairs.reserve(count);
  for (const Term& x : a) {
    for (const Term& y : b) {
      if (x.value + y.value > cap) break;
      pairs.push_back({x.value + y.value, checked_mul(x.mult, y.mult)});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Term& p, const Term& q) { return p.value < q.value; });
  Histogram out;
  for (const Term& t : pairs) {
    if (!out.empty() && out.back().value == t.value) {
      out.back().mult = checked_add(out.back().mult, t.mult);
    } else {
      out.push_back(t);
    }
  }
  return out;
}

bool same_terms(const std::vector<Term>& a, const std::vector<Term>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const Term& x, const Term& y) { return x.value == y.value && x.mult == y.mult; });
}

void check_toy(const cubes::ParamSet& params) {
  if (!(params.P <= kToyMaxP)) throw ValidationError("rep_count: toy scale only (P <= 60)");
}

}  // namespace

RepShape default_shape(RepMode mode, const cubes::ParamSet& params) {
  switch (mode) {
    case RepMode::R:
      return {static_cast<unsigned>(params.s), static_cast<unsigned>(params.t), 0};
    case RepMode::R4:
      return {0, 11, 46};
    case RepMode::K:
      return {0, 11, 0};
  }
  throw ValidationError("rep_count: unknown mode");
}

std::vector<expsums::Generator> rep_factors(const RepShape& shape, const cubes::ParamSet& params) {
  check_toy(params);
  std::vector<expsums::Generator> out;
  if (shape.plain > 0) {
    const auto h = expsums::Generator::from_params(expsums::GenMode::h, params);
    out.insert(out.end(), shape.plain, h);
  }
  if (shape.scaled > 0) {
    const auto W = expsums::Generator::from_params(expsums::GenMode::W, params);
    out.insert(out.end(), shape.scaled, W);
  }
  if (shape.twelfth > 0) {
    auto terms = expsums::Generator::from_params(expsums::GenMode::f_twelfth, params).terms();
    for (Term& t : terms) t.value *= 81;
    out.insert(out.end(), shape.twelfth, expsums::Generator(std::move(terms)));
  }
  return out;
}

u64 rep_count(std::span<const expsums::Generator> factors, u128 n) {
  if (factors.empty()) return n == 0 ? 1 : 0;
  std::vector<Histogram> hs;
  hs.reserve(factors.size());
  for (const auto& g : factors) {
    hs.push_back(sorted_terms(g));
    if (hs.back().empty()) return 0;
  }
  // Least total reachable from factors i.. onwards.
  std::vector<u128> floor_from(hs.size() + 1, 0);
  for (std::size_t i = hs.size(); i-- > 0;) floor_from[i] = floor_from[i + 1] + hs[i].front().value;
  if (floor_from[0] > n) return 0;

  Histogram acc{{0, 1}};
  for (std::size_t i = 0; i + 1 < hs.size(); ++i) {
    acc = convolve(acc, hs[i], n - floor_from[i + 1]);
    if (acc.empty()) return 0;
  }
  const Histogram& last = hs.back();
  u64 total = 0;
  for (const Term& t : acc) {
    const u128 want = n - t.value;
    const auto it = std::lower_bound(last.begin(), last.end(), want,
                                     [](const Term& x, u128 v) { return x.value < v; });
    if (it != last.end() && it->value == want) total = checked_add(total, checked_mul(t.mult, it->mult));
  }
  return total;
}

u64 rep_count(RepMode mode, u128 n, const cubes::ParamSet& params, std::optional<RepShape> shape) {
  const auto factors = rep_factors(shape.value_or(default_shape(mode, params)), params);
  return rep_count(factors, n);
}

double rep_count_fourier(std::span<const expsums::Generator> factors, u128 n) {
  return rep_count_fourier(factors, std::span<const u128>(&n, 1)).front();
}

std::vector<double> rep_count_fourier(std::span<const expsums::Generator> factors,
                                      std::span<const u128> ns) {
  u128 top = 0;
  for (const auto& g : factors) {
    u128 m = 0;
    for (const Term& t : g.terms()) m = std::max(m, t.value);
    top += m;
  }
  for (u128 n : ns) top = std::max(top, n);
  if (top >= kMaxFourierNodes) throw ResourceError("rep_count_fourier: more than 2^24 nodes");
  const std::size_t L = std::bit_ceil(static_cast<std::size_t>(top) + 1);
  using C = std::complex<double>;
  std::vector<C> product(L, C{1.0, 0.0});
  std::vector<C> values;
  const std::vector<Term>* previous = nullptr;
  for (const auto& g : factors) {
    // G(j/L) = Σ c_v e(vj/L), the unscaled inverse transform.
    if (previous == nullptr || !same_terms(*previous, g.terms())) {
      values.assign(L, C{});
      for (const Term& t : g.terms()) values[static_cast<std::size_t>(t.value)] += static_cast<double>(t.mult);
      transform::fft(values, true);
      for (C& v : values) v *= static_cast<double>(L);
      previous = &g.terms();
    }
    for (std::size_t j = 0; j < L; ++j) product[j] *= values[j];
  }
  // (1/L) Σ_j F(j/L) e(-jn/L)
  transform::fft(product, false);
  std::vector<double> out;
  out.reserve(ns.size());
  for (u128 n : ns) out.push_back(product[static_cast<std::size_t>(n)].real() / static_cast<double>(L));
  return out;
}

}  // namespace cubewaring::search
