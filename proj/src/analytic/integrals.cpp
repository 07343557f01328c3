#include <cmath>
#include <functional>
#include <numbers>

#include "cubewaring/analytic.hpp"
#include "cubewaring/error.hpp"

namespace cubewaring::analytic {
namespace {

constexpr int kMaxDepth = 40;
constexpr double kMaxPanels = 1e7;

Complex unit(long double cycles) {
  const long double f = cycles - std::floor(cycles);
  const double angle = static_cast<double>(2.0L * std::numbers::pi_v<long double> * f);
  return {std::cos(angle), std::sin(angle)};
}

using Integrand = std::function<Complex(double)>;

struct Simpson {
  const Integrand& f;
  bool ok = true;

  Complex refine(double a, double b, Complex fa, Complex fm, Complex fb, Complex whole, double eps,
                 int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const Complex flm = f(lm);
    const Complex frm = f(rm);
    const Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const Complex delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    if (depth <= 0) {
      ok = false;
      return left + right + delta / 15.0;
    }
    return refine(a, m, fa, flm, fm, left, eps / 2, depth - 1) +
           refine(m, b, fm, frm, fb, right, eps / 2, depth - 1);
  }

  Complex integrate(double a, double b, double eps) {
    const Complex fa = f(a);
    const Complex fb = f(b);
    const Complex fm = f(0.5 * (a + b));
    const Complex whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return refine(a, b, fa, fm, fb, whole, eps, kMaxDepth);
  }
};

// k-th root, exact-rounded for the common cases.
long double root_k(long double g, unsigned k) {
  switch (k) {
    case 1:
      return g;
    case 2:
      return std::sqrt(g);
    case 3:
      return std::cbrt(g);
    case 4:
      return std::sqrt(std::sqrt(g));
    default:
      return std::pow(g, 1.0L / k);
  }
}

struct Setup {
  double x_lo = 0;
  double x_hi = 0;
  long double scale3 = 1;  // p^3
  long double C_eff = 0;   // p^3 C
  unsigned k = 2;

  // γ(x) = (p^3 x^3 + p^3 C)^k
  [[nodiscard]] long double gamma(long double x) const {
    return std::pow(scale3 * x * x * x + C_eff, static_cast<long double>(k));
  }
  // Inverse of gamma.
  [[nodiscard]] long double x_of(long double g) const {
    return std::cbrt((root_k(g, k) - C_eff) / scale3);
  }
};

Setup make_setup(VMode mode, double C, u64 p, const cubes::ParamSet& params) {
  if (!(C >= 0.0)) throw ValidationError("v_integral: the shift must be nonnegative");
  Setup s;
  s.k = static_cast<unsigned>(params.k);
  if (mode == VMode::plain) {
    if (!(params.P >= 2.0)) throw ValidationError("v_integral: plain mode needs P >= 2");
    s.x_lo = params.P / 2.0;
    s.x_hi = params.P;
  } else {
    if (p < 2) throw ValidationError("v_integral: scaled mode needs a prime p");
    if (!(params.H1 >= 1.0)) throw ValidationError("v_integral: scaled mode needs H1 >= 1");
    s.x_lo = params.H1;
    s.x_hi = params.H2;
    s.scale3 = static_cast<long double>(p) * p * p;
  }
  s.C_eff = s.scale3 * C;
  return s;
}

std::size_t panel_count(double beta, long double g_lo, long double g_hi) {
  const long double cycles = std::abs(static_cast<long double>(beta)) * (g_hi - g_lo);
  const double panels = std::ceil(static_cast<double>(2.0L * cycles));
  if (panels > kMaxPanels) throw ResourceError("v_integral: more than 10^7 half-cycle panels");
  return std::max<std::size_t>(1, static_cast<std::size_t>(panels));
}

}  // namespace

QuadratureResult v_integral(VMode mode, double beta, double C, u64 p, const cubes::ParamSet& params) {
  const Setup s = make_setup(mode, C, p, params);
  const long double g_lo = s.gamma(s.x_lo);
  const long double g_hi = s.gamma(s.x_hi);
  const std::size_t panels = panel_count(beta, g_lo, g_hi);
  const Integrand f = [&](double x) { return unit(static_cast<long double>(beta) * s.gamma(x)); };
  Simpson simpson{f};
  const double tol = kQuadratureTolerance * (s.x_hi - s.x_lo);
  // Panel ends at equal steps of the phase.
  Complex total = 0;
  double a = s.x_lo;
  for (std::size_t j = 1; j <= panels; ++j) {
    const double b = j == panels ? s.x_hi
                                 : static_cast<double>(s.x_of(
                                       g_lo + (g_hi - g_lo) * static_cast<long double>(j) / panels));
    total += simpson.integrate(a, b, tol * (b - a) / (s.x_hi - s.x_lo));
    a = b;
  }
  return {total, simpson.ok, panels};
}

QuadratureResult v_integral_gamma(VMode mode, double beta, double C, u64 p,
                                  const cubes::ParamSet& params) {
  const Setup s = make_setup(mode, C, p, params);
  const auto g_lo = static_cast<double>(s.gamma(s.x_lo));
  const auto g_hi = static_cast<double>(s.gamma(s.x_hi));
  const std::size_t panels = panel_count(beta, g_lo, g_hi);
  const double C_eff = static_cast<double>(s.C_eff);
  const Integrand f = [&](double g) {
    return b_density(mode, g, C_eff, mode == VMode::plain ? 1 : p, s.k) *
           unit(static_cast<long double>(beta) * g);
  };
  Simpson simpson{f};
  const double tol = kQuadratureTolerance * (s.x_hi - s.x_lo);
  Complex total = 0;
  const double width = (g_hi - g_lo) / static_cast<double>(panels);
  for (std::size_t j = 0; j < panels; ++j) {
    const double a = g_lo + width * static_cast<double>(j);
    const double b = j + 1 == panels ? g_hi : a + width;
    total += simpson.integrate(a, b, tol / static_cast<double>(panels));
  }
  return {total, simpson.ok, panels};
}

Limits density_limits(const Shift& sh, const cubes::ParamSet& params) {
  const Setup s = make_setup(sh.mode(), sh.C, sh.p, params);
  return {static_cast<double>(s.gamma(s.x_lo)), static_cast<double>(s.gamma(s.x_hi))};
}

double b_density(VMode mode, double gamma, double C, u64 p, unsigned k) {
  if (k < 1) throw ValidationError("b_density: k must be positive");
  if (mode == VMode::scaled && p < 2) throw ValidationError("b_density: scaled mode needs p >= 2");
  const double r = static_cast<double>(root_k(gamma, k));
  if (!(gamma > 0.0) || !(r > C)) throw DomainError("b_density: needs γ^{1/k} > C");
  double v = std::pow(gamma, 1.0 / k - 1.0) * std::pow(r - C, -2.0 / 3.0) / (3.0 * k);
  if (mode == VMode::scaled) v /= static_cast<double>(p);
  return v;
}

DecayScan decay_scan(const cubes::ParamSet& params, double C, double beta_lo, double beta_hi,
                     std::size_t count) {
  if (!(beta_lo > 0.0) || !(beta_hi >= beta_lo) || count < 1) {
    throw ValidationError("decay_scan: needs 0 < beta_lo <= beta_hi and count >= 1");
  }
  DecayScan out;
  const double ratio = count > 1 ? std::pow(beta_hi / beta_lo, 1.0 / static_cast<double>(count - 1)) : 1.0;
  double beta = beta_lo;
  for (std::size_t i = 0; i < count; ++i, beta *= ratio) {
    const double v = std::abs(v_integral(VMode::plain, beta, C, 1, params).value);
    out.points.emplace_back(beta, v);
    const double r = v * (1.0 + params.n * beta) / params.P;
    if (r > out.max_ratio) {
      out.max_ratio = r;
      out.argmax_beta = beta;
    }
  }
  return out;
}

}  // namespace cubewaring::analytic
