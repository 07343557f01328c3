#include <cmath>
#include <numbers>

#include "cubewaring/error.hpp"
#include "cubewaring/expsums.hpp"

namespace cubewaring::expsums {
namespace {

// frac(x)·2^128 for x >= 0, truncated.
u128 fixed_fraction(double x) {
  const double f = x - std::floor(x);
  const double scaled = std::ldexp(f, 64);
  const double hi = std::floor(scaled);
  const double lo = std::floor(std::ldexp(scaled - hi, 64));
  return (static_cast<u128>(static_cast<u64>(hi)) << 64U) | static_cast<u64>(lo);
}

u128 fixed_alpha(double alpha) {
  if (!std::isfinite(alpha)) throw DomainError("alpha must be finite");
  const u128 a = fixed_fraction(std::abs(alpha));
  return alpha < 0 ? static_cast<u128>(0) - a : a;
}

Complex unit(u128 phase) {
  const double t = std::ldexp(static_cast<double>(static_cast<u64>(phase >> 64U)), -64);
  const double angle = 2.0 * std::numbers::pi * t;
  return {std::cos(angle), std::sin(angle)};
}

u128 power_or_throw(u128 base, unsigned k, const char* what) {
  u128 out = 0;
  if (!core::checked_pow(base, k, out)) {
    throw OverflowError(std::string(what) + ": value " + core::to_string(base) + "^" +
                        std::to_string(k) + " exceeds 128 bits");
  }
  return out;
}

}  // namespace

Complex exact_phase(double alpha, u128 N) { return unit(fixed_alpha(alpha) * N); }

Generator Generator::h(const cubes::WeightMap& a, unsigned k) {
  std::vector<Term> terms;
  terms.reserve(a.entries.size());
  for (const auto& [x, m] : a.entries) terms.push_back({power_or_throw(x, k, "h"), m});
  return Generator(std::move(terms));
}

Generator Generator::W(const cubes::WeightMap& b, std::span<const u64> primes, unsigned k) {
  std::vector<Term> terms;
  terms.reserve(b.entries.size() * primes.size());
  for (u64 p : primes) {
    const u128 p3 = static_cast<u128>(p) * p * p;
    for (const auto& [h, m] : b.entries) {
      const u128 base = p3 * h;
      if (base / h != p3) throw OverflowError("W: p^3 h exceeds 128 bits");
      terms.push_back({power_or_throw(base, k, "W"), m});
    }
  }
  return Generator(std::move(terms));
}

Generator Generator::f_cube_smooth(const smooth::SmoothSet& ys, unsigned k) {
  std::vector<Term> terms;
  for (u64 y : ys.members) {
    const u128 t = 3 * static_cast<u128>(y) * y * y;
    terms.push_back({power_or_throw(t, k, "f_cube_smooth"), 1});
  }
  return Generator(std::move(terms));
}

Generator Generator::f_twelfth(const smooth::SmoothSet& ys) {
  std::vector<Term> terms;
  for (u64 y : ys.members) terms.push_back({power_or_throw(y, 12, "f_twelfth"), 1});
  return Generator(std::move(terms));
}

Generator Generator::from_params(GenMode mode, const cubes::ParamSet& params) {
  const auto k = static_cast<unsigned>(params.k);
  switch (mode) {
    case GenMode::h:
      return h(cubes::build_weights(params, cubes::WeightMode::a), k);
    case GenMode::W: {
      const auto primes = core::primes_in_range(params.M / 2.0, params.M);
      if (primes.empty()) throw ValidationError("W: no primes in [M/2, M]");
      return W(cubes::build_weights(params, cubes::WeightMode::b), primes, k);
    }
    case GenMode::f_cube_smooth:
    case GenMode::f_twelfth: {
      const u64 R = params.smooth_bound();
      if (R < 1) throw ValidationError("smooth bound P^eta is below 1");
      const auto ys = smooth::smooth_set(static_cast<u64>(std::floor(params.P + 1e-9)), R);
      return mode == GenMode::f_twelfth ? f_twelfth(ys) : f_cube_smooth(ys, k);
    }
  }
  throw ValidationError("unknown generating function");
}

Complex Generator::operator()(double alpha) const {
  const u128 A = fixed_alpha(alpha);
  constexpr std::size_t kBlock = 256;
  std::vector<Complex> blocks;
  blocks.reserve(terms_.size() / kBlock + 1);
  Complex acc = 0;
  std::size_t in_block = 0;
  for (const auto& t : terms_) {
    acc += static_cast<double>(t.mult) * unit(A * t.value);
    if (++in_block == kBlock) {
      blocks.push_back(acc);
      acc = 0;
      in_block = 0;
    }
  }
  blocks.push_back(acc);
  return pairwise_sum(blocks);
}

std::vector<Complex> Generator::evaluate(std::span<const double> alphas, unsigned threads) const {
  std::vector<Complex> out(alphas.size());
  const std::size_t chunks = std::max<std::size_t>(1, alphas.size() / 8);
  core::parallel_chunks(alphas.size(), chunks, threads, [&](std::size_t, core::ChunkRange r) {
    for (std::size_t i = r.begin; i < r.end; ++i) out[i] = (*this)(alphas[i]);
  });
  return out;
}

u64 Generator::mass() const {
  u64 total = 0;
  for (const auto& t : terms_) total += t.mult;
  return total;
}

Complex eval_generating(GenMode mode, double alpha, const cubes::ParamSet& params) {
  return Generator::from_params(mode, params)(alpha);
}

}  // namespace cubewaring::expsums
