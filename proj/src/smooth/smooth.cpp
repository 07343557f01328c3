#include "cubewaring/smooth.hpp"

#include <algorithm>
#include <cmath>

#include "cubewaring/error.hpp"

namespace cubewaring::smooth {

std::vector<std::uint32_t> largest_prime_factors(u64 Y) {
  if (Y > (u64{1} << 32U)) throw ResourceError("smooth sieve limit exceeds 2^32");
  std::vector<std::uint32_t> lpf(Y + 1, 0);
  for (u64 i = 2; i <= Y; ++i) {
    if (lpf[i] != 0) continue;
    for (u64 j = i; j <= Y; j += i) {
      if (lpf[j] == 0) lpf[j] = static_cast<std::uint32_t>(i);
    }
  }
  std::vector<std::uint32_t> gpf(Y + 1, 0);
  if (Y >= 1) gpf[1] = 1;
  for (u64 n = 2; n <= Y; ++n) gpf[n] = std::max(lpf[n], gpf[n / lpf[n]]);
  return gpf;
}

bool SmoothSet::contains(u64 n) const {
  return std::binary_search(members.begin(), members.end(), n);
}

SmoothSet smooth_set(u64 Y, u64 R) {
  if (Y < 1) throw ValidationError("smooth_set: Y must be at least 1");
  if (R < 1) throw ValidationError("smooth_set: R must be at least 1");
  SmoothSet out{Y, R, {}};
  if (R >= Y) {
    out.members.resize(Y);
    for (u64 i = 0; i < Y; ++i) out.members[i] = i + 1;
    return out;
  }
  const auto gpf = largest_prime_factors(Y);
  for (u64 n = 1; n <= Y; ++n) {
    if (gpf[n] <= R) out.members.push_back(n);
  }
  return out;
}

u64 smoothness_bound(u64 Y, double u) {
  if (!(u >= 1.0)) throw ValidationError("smoothness_bound: u must be at least 1");
  auto r = static_cast<u64>(std::floor(std::pow(static_cast<double>(Y), 1.0 / u)));
  const auto fits = [&](u64 c) {
    return u * std::log(static_cast<double>(c)) <= std::log(static_cast<double>(Y)) + 1e-12;
  };
  while (r > 1 && !fits(r)) --r;
  while (fits(r + 1)) ++r;
  return r;
}

RhoTable::RhoTable(double x_max, unsigned steps_per_unit)
    : per_unit_(steps_per_unit), step_(1.0 / steps_per_unit), x_max_(x_max) {
  if (!(x_max >= 1.0) || steps_per_unit == 0) throw ValidationError("RhoTable: bad grid");
  const auto nodes = static_cast<std::size_t>(std::ceil(x_max * per_unit_)) + 1;
  x_max_ = static_cast<double>(nodes - 1) * step_;
  values_.assign(nodes, 1.0);
  const std::size_t lag = per_unit_;
  // x·rho(x) = ∫_{x-1}^{x} rho(t) dt (the delay equation integrated once),
  // trapezoid over the window. Every update is a positive combination, so
  // relative accuracy survives far into the tail where rho is tiny.
  const auto window_sum = [&](std::size_t lo, std::size_t hi) {
    long double acc = 0;
    for (std::size_t j = lo; j <= hi; ++j) acc += values_[j];
    return acc;
  };
  long double inner = 0;  // Σ rho_j for j in (m - lag, m)
  for (std::size_t m = lag + 1; m < nodes; ++m) {
    if ((m - lag - 1) % lag == 0) {
      inner = window_sum(m - lag + 1, m - 1);
    } else {
      inner += values_[m - 1] - values_[m - lag];
    }
    const double x = static_cast<double>(m) * step_;
    const long double rhs = step_ * (0.5L * values_[m - lag] + inner);
    values_[m] = static_cast<double>(rhs / (x - 0.5 * step_));
  }
}

double RhoTable::operator()(double x) const {
  if (x < 0.0) return 0.0;
  if (x <= 1.0) return 1.0;
  if (x > x_max_) throw DomainError("RhoTable: argument beyond table");
  const double pos = x * per_unit_;
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= values_.size()) return values_.back();
  const double frac = pos - static_cast<double>(i);
  return values_[i] + frac * (values_[i + 1] - values_[i]);
}

const RhoTable& RhoTable::shared() {
  static const RhoTable table(30.0);
  return table;
}

double dickman_rho(double x) {
  if (std::isnan(x) || std::isinf(x)) {
    if (x < 0) return 0.0;
    throw DomainError("dickman_rho: argument must be finite");
  }
  const auto& table = RhoTable::shared();
  if (x <= table.x_max()) return table(x);
  return RhoTable(x + 1.0)(x);
}

PsiReport psi_ratio_report(u64 Y, double u) {
  if (Y < 100) throw ValidationError("psi_ratio_report: Y must be at least 100");
  PsiReport rep;
  rep.Y = Y;
  rep.u = u;
  rep.R = smoothness_bound(Y, u);
  if (rep.R < 2) throw ValidationError("psi_ratio_report: Y^(1/u) must be at least 2");
  const auto gpf = largest_prime_factors(Y);
  for (u64 n = 1; n <= Y; ++n) rep.psi += gpf[n] <= rep.R ? 1 : 0;
  rep.ratio = static_cast<double>(rep.psi) / static_cast<double>(Y);
  rep.rho = dickman_rho(u);
  return rep;
}

}  // namespace cubewaring::smooth
