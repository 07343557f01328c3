#pragma once

// The oscillatory integrals v_y(β) and v_{y,p}(β), their densities B, the
// convolution φ giving J(n), the major arc approximants V(α,q,a) and
// W(α,q,a), and the weighted sum w(β).

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "cubewaring/core.hpp"
#include "cubewaring/cubes.hpp"

namespace cubewaring::analytic {

using Complex = std::complex<double>;
using core::u64;

enum class VMode { plain, scaled };

// A slot of J: C = C_y = y1^3 + y2^3 (real so large y fit); p > 1 marks a
// scaled slot v_{y,p} whose effective shift is p^3 C.
struct Shift {
  double C = 0;
  u64 p = 1;
  [[nodiscard]] VMode mode() const { return p > 1 ? VMode::scaled : VMode::plain; }
};

struct QuadratureResult {
  Complex value;
  bool accurate = true;  // false when a panel hit the depth floor
  std::size_t panels = 0;
};

inline constexpr double kQuadratureTolerance = 1e-9;  // per unit length

// plain: ∫_{P/2}^{P} e(β (x^3 + C)^k) dx.
// scaled: ∫_{H1}^{H2} e(β p^{3k} (x^3 + C)^k) dx.
QuadratureResult v_integral(VMode mode, double beta, double C, u64 p, const cubes::ParamSet& params);

// The same integral after γ = (p^3 x^3 + p^3 C)^k: ∫_{M}^{N} B(γ) e(βγ) dγ.
QuadratureResult v_integral_gamma(VMode mode, double beta, double C, u64 p,
                                  const cubes::ParamSet& params);

struct Limits {
  double lo = 0;  // M_y or M_{y,p}
  double hi = 0;  // N_y or N_{y,p}
};
Limits density_limits(const Shift& s, const cubes::ParamSet& params);

// (1/3k) γ^{1/k-1} (γ^{1/k} - C)^{-2/3}, divided by p in scaled mode. C is
// the effective shift (p^3 C_y when scaled).
double b_density(VMode mode, double gamma, double C, u64 p, unsigned k);

// A density sampled as cell averages on [lo, lo + step·size].
struct DensityGrid {
  double lo = 0;
  double step = 0;
  std::vector<double> masses;  // cell averages, >= 0

  [[nodiscard]] double hi() const { return lo + step * static_cast<double>(masses.size()); }
  [[nodiscard]] double total() const;  // Σ masses·step
  // Linear interpolation between cell centres; 0 outside [lo, hi].
  [[nodiscard]] double at(double v) const;
};

// Exact cell averages of B for one slot on cells of width `step` from M.
DensityGrid slot_density(const Shift& s, const cubes::ParamSet& params, double step);

// Convolution of two grids with a common step.
DensityGrid convolve(const DensityGrid& a, const DensityGrid& b);

// Balanced-tree convolution of every grid, evaluated at v.
double phi_convolve(std::span<const DensityGrid> grids, double v);
DensityGrid convolve_all(std::span<const DensityGrid> grids);

inline constexpr std::size_t kDefaultBins = std::size_t{1} << 20U;

// J(n) = φ(n) for the given slots on `bins` cells spanning [Σ M_i, Σ N_i].
double j_value(double n, std::span<const Shift> slots, const cubes::ParamSet& params,
               std::size_t bins = kDefaultBins);

// J(n)·n/(P^s H^{t/3}) with s plain and t scaled slots.
double j_normalized(double n, std::span<const Shift> slots, const cubes::ParamSet& params,
                    std::size_t bins = kDefaultBins);

// ---------------------------------------------------------------------------

enum class ApproxMode { V, W };

struct ApproxResult {
  Complex value;
  bool prime_divides_q = false;
  bool accurate = true;
};

// V: q^{-1} Σ_y S_y(q,a) v_y(β) over y in A(P,P^eta)^2.
// W: q^{-1} Σ_{y,p} S_{py}(q,a) v_{y,p}(β) over y in A(H3,P^eta)^2, p in [M/2, M].
ApproxResult eval_major_approx(ApproxMode mode, double alpha, u64 a, u64 q,
                               const cubes::ParamSet& params);

// w(β) = Σ_{P^{12η} < x <= n} x^{-11/12} ρ(log x/(12η log P)) e(βx) / 12.
Complex w_beta(double beta, u64 n, double P, double eta);

struct DecayScan {
  double max_ratio = 0;  // |v(β)|(1 + n|β|)/P
  double argmax_beta = 0;
  std::vector<std::pair<double, double>> points;  // (β, |v|)
};

// Log-spaced β in [beta_lo, beta_hi] for the plain integral with shift C.
DecayScan decay_scan(const cubes::ParamSet& params, double C, double beta_lo, double beta_hi,
                     std::size_t count);

}  // namespace cubewaring::analytic
