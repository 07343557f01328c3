#include <algorithm>
#include <cmath>

#include "cubewaring/analytic.hpp"
#include "cubewaring/error.hpp"
#include "cubewaring/transform.hpp"

namespace cubewaring::analytic {
namespace {

double kth_root(double g, unsigned k) {
  switch (k) {
    case 2:
      return std::sqrt(g);
    case 3:
      return std::cbrt(g);
    case 4:
      return std::sqrt(std::sqrt(g));
    default:
      return std::pow(g, 1.0 / k);
  }
}

}  // namespace

double DensityGrid::total() const {
  double s = 0;
  for (double m : masses) s += m;
  return s * step;
}

double DensityGrid::at(double v) const {
  if (masses.empty() || v < lo || v > hi()) return 0.0;
  const double t = (v - lo) / step - 0.5;
  if (t <= 0.0) return masses.front();
  const auto last = static_cast<double>(masses.size() - 1);
  if (t >= last) return masses.back();
  const auto i = static_cast<std::size_t>(t);
  const double f = t - static_cast<double>(i);
  return (1.0 - f) * masses[i] + f * masses[i + 1];
}

DensityGrid slot_density(const Shift& s, const cubes::ParamSet& params, double step) {
  if (!(step > 0.0)) throw ValidationError("slot_density: step must be positive");
  const Limits lim = density_limits(s, params);
  const double cells_d = std::ceil((lim.hi - lim.lo) / step);
  if (cells_d > 1e8) throw ResourceError("slot_density: more than 10^8 cells");
  const auto cells = std::max<std::size_t>(1, static_cast<std::size_t>(cells_d));
  const auto k = static_cast<unsigned>(params.k);
  const double scale = s.p > 1 ? static_cast<double>(s.p) : 1.0;
  const double C_eff = s.C * scale * scale * scale;
  // ∫ B over [g0, g1] is the change in x(γ) = (γ^{1/k} - C_eff)^{1/3}/p.
  const auto x_of = [&](double g) {
    const double u = kth_root(g, k) - C_eff;
    if (!(u > 0.0)) throw DomainError("slot_density: γ^{1/k} <= C on the support");
    return std::cbrt(u) / scale;
  };
  DensityGrid out;
  out.lo = lim.lo;
  out.step = step;
  out.masses.resize(cells);
  double x_prev = x_of(lim.lo);
  for (std::size_t j = 0; j < cells; ++j) {
    const double g1 = j + 1 == cells ? lim.hi : std::min(lim.hi, lim.lo + step * static_cast<double>(j + 1));
    const double x1 = x_of(g1);
    out.masses[j] = std::max(0.0, x1 - x_prev) / step;
    x_prev = x1;
  }
  return out;
}

DensityGrid convolve(const DensityGrid& a, const DensityGrid& b) {
  if (a.masses.empty() || b.masses.empty()) throw ValidationError("convolve: empty grid");
  if (std::abs(a.step - b.step) > 1e-12 * std::max(a.step, b.step)) {
    throw ValidationError("convolve: grids must share a step");
  }
  DensityGrid out;
  out.step = a.step;
  // Cell centres add: the result's cells are centred on lo_a + lo_b + (i+j+1)Δ.
  out.lo = a.lo + b.lo + 0.5 * a.step;
  out.masses = transform::linear_convolve(a.masses, b.masses);
  for (double& m : out.masses) m = std::max(0.0, m * a.step);
  return out;
}

DensityGrid convolve_all(std::span<const DensityGrid> grids) {
  if (grids.empty()) throw ValidationError("phi_convolve: at least one grid is required");
  // Normalize to unit mass so long products cannot underflow, then restore.
  std::vector<DensityGrid> level;
  double scale = 1.0;
  for (const auto& g : grids) {
    const double t = g.total();
    if (!(t > 0.0)) throw ValidationError("phi_convolve: a grid has no mass");
    DensityGrid n = g;
    for (double& m : n.masses) m /= t;
    level.push_back(std::move(n));
    scale *= t;
  }
  while (level.size() > 1) {
    std::vector<DensityGrid> next;
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(convolve(level[i], level[i + 1]));
    if (level.size() % 2 == 1) next.push_back(std::move(level.back()));
    level.swap(next);
  }
  DensityGrid out = std::move(level.front());
  for (double& m : out.masses) m *= scale;
  return out;
}

double phi_convolve(std::span<const DensityGrid> grids, double v) { return convolve_all(grids).at(v); }

double j_value(double n, std::span<const Shift> slots, const cubes::ParamSet& params, std::size_t bins) {
  if (slots.empty()) throw ValidationError("j_value: at least one slot is required");
  if (bins < 16) throw ValidationError("j_value: at least 16 bins");
  double lo = 0;
  double hi = 0;
  for (const auto& s : slots) {
    const Limits l = density_limits(s, params);
    lo += l.lo;
    hi += l.hi;
  }
  if (n < lo || n > hi) return 0.0;
  const double step = (hi - lo) / static_cast<double>(bins);
  std::vector<DensityGrid> grids;
  grids.reserve(slots.size());
  for (const auto& s : slots) grids.push_back(slot_density(s, params, step));
  return phi_convolve(grids, n);
}

double j_normalized(double n, std::span<const Shift> slots, const cubes::ParamSet& params,
                    std::size_t bins) {
  double s = 0;
  double t = 0;
  for (const auto& sh : slots) (sh.p > 1 ? t : s) += 1.0;
  return j_value(n, slots, params, bins) * n / (std::pow(params.P, s) * std::pow(params.H, t / 3.0));
}

}  // namespace cubewaring::analytic
