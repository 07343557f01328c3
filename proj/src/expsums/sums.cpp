#include <cmath>
#include <numbers>

#include "cubewaring/error.hpp"
#include "cubewaring/expsums.hpp"

namespace cubewaring::expsums {
namespace {

constexpr std::size_t kBlock = 64;

Complex pairwise_rec(std::span<const Complex> t) {
  if (t.size() <= kBlock) {
    Complex s = 0;
    for (const auto& z : t) s += z;
    return s;
  }
  const std::size_t half = t.size() / 2;
  return pairwise_rec(t.first(half)) + pairwise_rec(t.subspan(half));
}

void check_k(int k) {
  if (k < 2 || k > 4) throw ValidationError("k must be 2, 3 or 4");
}

// (r^3 + C)^k mod q.
u64 shifted_power(u64 r, u64 C, unsigned k, u64 q) {
  const u64 v = (core::powmod(r, 3, q) + C % q) % q;
  return core::powmod(v, k, q);
}

}  // namespace

Complex pairwise_sum(std::span<const Complex> terms) { return pairwise_rec(terms); }

PhaseTable::PhaseTable(u64 q) : q_(q) {
  if (q == 0) throw ValidationError("PhaseTable: modulus must be positive");
  table_.resize(q);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(q);
  for (u64 j = 0; j < q; ++j) {
    const double angle = step * static_cast<double>(j);
    table_[j] = {std::cos(angle), std::sin(angle)};
  }
}

Complex gauss_power_sum(u64 q, u64 a, unsigned k) {
  if (q == 0) throw ValidationError("gauss_power_sum: q must be positive");
  return gauss_power_sum(PhaseTable(q), a, k);
}

Complex gauss_power_sum(const PhaseTable& e, u64 a, unsigned k) {
  const u64 q = e.modulus();
  std::vector<Complex> terms(q);
  a %= q;
  for (u64 r = 1; r <= q; ++r) terms[r - 1] = e[core::mulmod(a, core::powmod(r, k, q), q)];
  return pairwise_sum(terms);
}

Complex shifted_sum(u64 q, u64 a, u64 b, u64 C, unsigned k) {
  if (q == 0) throw ValidationError("shifted_sum: q must be positive");
  const PhaseTable e(q);
  std::vector<Complex> terms(q);
  a %= q;
  b %= q;
  for (u64 r = 1; r <= q; ++r) {
    const u64 idx = (core::mulmod(a, shifted_power(r, C, k, q), q) + core::mulmod(b, r, q)) % q;
    terms[r - 1] = e[idx];
  }
  return pairwise_sum(terms);
}

Complex cube_shift_sum(u64 q, u64 a, u64 C, unsigned k) { return shifted_sum(q, a, 0, C, k); }

double tau_weight(const core::FactoredInteger& q, int k) {
  check_k(k);
  if (k == 2) return 1.0 / std::sqrt(static_cast<double>(q.value));
  const auto rule = [k](u64 p, unsigned e) {
    const unsigned u = (e - 1) / k;
    const unsigned v = e - u * k;
    const double pd = static_cast<double>(p);
    if (v == 1) return k * std::pow(pd, -static_cast<double>(u) - 0.5);
    return std::pow(pd, -static_cast<double>(u) - 1.0);
  };
  return core::eval_multiplicative(rule, q);
}

double w_weight(const core::FactoredInteger& q, int k) {
  check_k(k);
  const auto rule = [k](u64 p, unsigned e) {
    const unsigned span = 3 * static_cast<unsigned>(k);
    const unsigned u = (e - 1) / span;
    const unsigned v = e - u * span;
    const double pd = static_cast<double>(p);
    if (u >= 1) return std::pow(pd, -static_cast<double>(u) - static_cast<double>(v) / span);
    return v >= 2 ? 1.0 / pd : 1.0 / std::sqrt(pd);
  };
  return core::eval_multiplicative(rule, q);
}

u64 slot_shift_mod(const Slot& s, u64 m) {
  const u64 p3 = core::powmod(s.p, 3, m);
  return core::mulmod(p3, s.C % m, m);
}

ProductSum product_sum(u64 q, std::span<const Slot> slots, u64 n, unsigned k) {
  if (q == 0) throw ValidationError("product_sum: q must be positive");
  ProductSum out;
  for (const auto& s : slots) out.prime_divides_q = out.prime_divides_q || (s.p > 1 && q % s.p == 0);
  if (q == 1) {
    out.value = 1.0;
    return out;
  }
  const PhaseTable e(q);
  // Value histogram of (r^3 + C)^k mod q per slot, kept sparse.
  std::vector<std::vector<std::pair<u64, double>>> hist(slots.size());
  std::vector<u64> dense(q);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    std::fill(dense.begin(), dense.end(), 0);
    const u64 C = slot_shift_mod(slots[i], q);
    for (u64 r = 1; r <= q; ++r) ++dense[shifted_power(r, C, k, q)];
    for (u64 v = 0; v < q; ++v) {
      if (dense[v] != 0) hist[i].emplace_back(v, static_cast<double>(dense[v]));
    }
  }
  const double inv_q = 1.0 / static_cast<double>(q);
  std::vector<Complex> terms;
  std::vector<Complex> parts;
  for (u64 a = 1; a <= q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    Complex prod = e[core::mulmod(q - a, n % q, q)];
    for (const auto& h : hist) {
      parts.clear();
      for (const auto& [v, c] : h) parts.push_back(c * e[core::mulmod(a, v, q)]);
      prod *= pairwise_sum(parts) * inv_q;
    }
    terms.push_back(prod);
  }
  const Complex total = pairwise_sum(terms);
  out.value = total.real();
  out.imag_residue = std::abs(total.imag());
  return out;
}

}  // namespace cubewaring::expsums
