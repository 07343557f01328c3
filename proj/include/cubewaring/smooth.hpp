#pragma once

// Smooth sets A(Y, R) and the Dickman function.

#include <cstdint>
#include <vector>

#include "cubewaring/core.hpp"

namespace cubewaring::smooth {

using core::u64;

// gpf[n] for 0 <= n <= Y, with gpf[0] = 0 and gpf[1] = 1. Built from a
// least-prime-factor sieve.
std::vector<std::uint32_t> largest_prime_factors(u64 Y);

struct SmoothSet {
  u64 Y = 0;
  u64 R = 0;
  std::vector<u64> members;  // ascending, always starts with 1

  [[nodiscard]] bool contains(u64 n) const;
  [[nodiscard]] std::size_t size() const { return members.size(); }
};

// {n in [1, Y] : every prime factor of n is <= R}.
SmoothSet smooth_set(u64 Y, u64 R);

// floor(Y^(1/u)), exact when Y^(1/u) is an integer.
u64 smoothness_bound(u64 Y, double u);

// rho on a uniform grid over [0, x_max], solved by the trapezoid rule. The
// step divides 1, so the delayed term always falls on a stored node.
class RhoTable {
 public:
  explicit RhoTable(double x_max, unsigned steps_per_unit = 10000);

  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] double step() const { return step_; }
  [[nodiscard]] double x_max() const { return x_max_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }

  // Process-wide table over [0, 30], built on first use.
  static const RhoTable& shared();

 private:
  unsigned per_unit_;
  double step_;
  double x_max_;
  std::vector<double> values_;
};

double dickman_rho(double x);

struct PsiReport {
  u64 Y = 0;
  double u = 0;
  u64 R = 0;
  u64 psi = 0;
  double ratio = 0;
  double rho = 0;
};

PsiReport psi_ratio_report(u64 Y, double u);

}  // namespace cubewaring::smooth
