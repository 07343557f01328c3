#include <cmath>
#include <random>

#include "cubewaring/analytic.hpp"
#include "cubewaring/error.hpp"
#include "cubewaring/expsums.hpp"
#include "cubewaring/smooth.hpp"
#include "doctest.h"

using namespace cubewaring;
using namespace cubewaring::analytic;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

// Composite Simpson with an even number of intervals.
template <class F>
double simpson(F f, double a, double b, std::size_t intervals) {
  const double h = (b - a) / static_cast<double>(intervals);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < intervals; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
  return s * h / 3.0;
}

// Compliant desk tuple: y_i <= P/2 for plain slots, p in [M/2, 51M/100].
std::vector<Shift> desk_tuple(const cubes::ParamSet& p) {
  const auto pow2_below = [](double x) {
    double y = 1;
    while (2 * y <= x) y *= 2;
    return y;
  };
  const double y = pow2_below(p.P / 2.0);
  const double z = pow2_below(p.H3);
  const auto primes = core::primes_in_range(p.M / 2.0, 0.51 * p.M);
  REQUIRE(!primes.empty());
  return {{2.0, 1},
          {y * y * y + 1.0, 1},
          {2.0 * y * y * y, 1},
          {y * y * y / 8.0 + 8.0, 1},
          {2.0, primes.front()},
          {z * z * z + 1.0, primes.front()},
          {2.0 * z * z * z, primes.back()},
          {z * z * z / 8.0, primes.back()}};
}

}  // namespace

TEST_CASE("v_integral at beta = 0") {
  const auto p = cubes::ParamSet::toy(2, 20.0, 3.0, 6000.0, 0.5);
  CHECK(v_integral(VMode::plain, 0.0, 9.0, 1, p).value.real() == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(std::abs(v_integral(VMode::plain, 0.0, 9.0, 1, p).value.imag()) < 1e-15);
  CHECK(v_integral(VMode::scaled, 0.0, 9.0, 5, p).value.real() ==
        doctest::Approx(p.H2 - p.H1).epsilon(1e-12));
  CHECK(v_integral_gamma(VMode::plain, 0.0, 9.0, 1, p).value.real() == doctest::Approx(10.0).epsilon(1e-9));
  CHECK_THROWS_AS(v_integral(VMode::scaled, 0.0, 9.0, 1, p), ValidationError);
}

TEST_CASE("change of variables identity on random triples") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const int k = 2 + static_cast<int>(rng() % 3);
    const auto params = cubes::ParamSet::toy(k, 20.0, 3.0, 6000.0, 0.5);
    const double C = static_cast<double>(rng() % 2000);
    const bool scaled = i % 2 == 1;
    const u64 prime = scaled ? 3 : 1;
    const auto lim = density_limits({C, prime}, params);
    const double beta = unif(rng) * 40.0 / (lim.hi - lim.lo);
    const VMode mode = scaled ? VMode::scaled : VMode::plain;
    const auto x = v_integral(mode, beta, C, prime, params);
    const auto g = v_integral_gamma(mode, beta, C, prime, params);
    CHECK(x.accurate);
    CHECK(g.accurate);
    worst = std::max(worst, rel(g.value, x.value));
    CHECK(rel(g.value, x.value) < 1e-6);
  }
  MESSAGE("worst relative deviation " << worst);
}

TEST_CASE("v_integral against a fine fixed rule") {
  const auto p = cubes::ParamSet::toy(3, 10.0, 3.0, 6000.0, 0.5);
  const double beta = 3e-8;
  const auto v = v_integral(VMode::plain, beta, 35.0, 1, p).value;
  const auto phase = [&](double x) { return std::pow(x * x * x + 35.0, 3) * beta; };
  const double re = simpson([&](double x) { return std::cos(2 * M_PI * phase(x)); }, 5.0, 10.0, 2'000'000);
  const double im = simpson([&](double x) { return std::sin(2 * M_PI * phase(x)); }, 5.0, 10.0, 2'000'000);
  CHECK(rel(v, {re, im}) < 1e-7);
}

TEST_CASE("b_density") {
  for (unsigned k : {2U, 3U, 4U}) CHECK(b_density(VMode::plain, 1.0, 0.0, 1, k) == doctest::Approx(1.0 / (3 * k)));
  const auto p = cubes::ParamSet::toy(2, 20.0, 3.0, 6000.0, 0.5);
  const auto lim = density_limits({100.0, 1}, p);
  double prev = INFINITY;
  for (int i = 0; i <= 1000; ++i) {
    const double g = lim.lo + (lim.hi - lim.lo) * i / 1000.0;
    const double b = b_density(VMode::plain, g, 100.0, 1, 2);
    CHECK(b < prev);
    prev = b;
    CHECK(b_density(VMode::scaled, g, 100.0, 7, 2) == doctest::Approx(b / 7.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(b_density(VMode::plain, 4.0, 2.0, 1, 2), DomainError);
}

TEST_CASE("slot densities") {
  const auto p = cubes::ParamSet::toy(2, 20.0, 3.0, 6000.0, 0.5);
  const auto lim = density_limits({100.0, 1}, p);
  const auto g = slot_density({100.0, 1}, p, (lim.hi - lim.lo) / 100000.0);
  CHECK(g.total() == doctest::Approx(10.0).epsilon(1e-9));
  for (double m : g.masses) CHECK(m >= 0.0);
  for (int i = 1; i < 20; ++i) {
    const double v = lim.lo + (lim.hi - lim.lo) * i / 20.0;
    CHECK(phi_convolve(std::span(&g, 1), v) == doctest::Approx(b_density(VMode::plain, v, 100.0, 1, 2)).epsilon(1e-6));
  }
  const auto ls = density_limits({50.0, 5}, p);
  const auto gs = slot_density({50.0, 5}, p, (ls.hi - ls.lo) / 1000.0);
  CHECK(gs.total() == doctest::Approx(p.H2 - p.H1).epsilon(1e-9));
}

TEST_CASE("two-slot convolution against direct quadrature") {
  const auto p = cubes::ParamSet::toy(2, 20.0, 3.0, 6000.0, 0.5);
  const Shift a{9.0, 1};
  const Shift b{1000.0, 1};
  const auto la = density_limits(a, p);
  const auto lb = density_limits(b, p);
  const double step = (la.hi + lb.hi - la.lo - lb.lo) / static_cast<double>(kDefaultBins);
  const std::vector<DensityGrid> grids{slot_density(a, p, step), slot_density(b, p, step)};
  const auto conv = convolve_all(grids);
  double worst = 0;
  for (int i = 1; i < 20; ++i) {
    const double v = la.lo + lb.lo + (la.hi + lb.hi - la.lo - lb.lo) * i / 20.0;
    const double x0 = std::max(la.lo, v - lb.hi);
    const double x1 = std::min(la.hi, v - lb.lo);
    const double direct = simpson(
        [&](double x) {
          return b_density(VMode::plain, x, 9.0, 1, 2) * b_density(VMode::plain, v - x, 1000.0, 1, 2);
        },
        x0, x1, 20000);
    const double got = conv.at(v);
    CHECK(got >= 0.0);
    worst = std::max(worst, std::abs(got - direct) / direct);
    CHECK(got == doctest::Approx(direct).epsilon(1e-4));
  }
  MESSAGE("worst relative deviation " << worst);
  CHECK(conv.total() == doctest::Approx(grids[0].total() * grids[1].total()).epsilon(1e-5));
}

TEST_CASE("j_value: support, mass, permutations and refinement") {
  const auto p = cubes::ParamSet::from_n(2, 1e48);
  auto slots = desk_tuple(p);
  double lo = 0;
  double hi = 0;
  for (const auto& s : slots) {
    lo += density_limits(s, p).lo;
    hi += density_limits(s, p).hi;
  }
  CHECK(j_value(lo * 0.99, slots, p) == 0.0);
  CHECK(j_value(hi * 1.01, slots, p) == 0.0);

  const double n = p.n;
  const double j = j_value(n, slots, p);
  CHECK(j > 0.0);
  const double coarse = j_value(n, slots, p, kDefaultBins / 2);
  MESSAGE("grid doubling change " << std::abs(j - coarse) / j);
  CHECK(std::abs(j - coarse) / j < 1e-3);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 3; ++i) {
    std::shuffle(slots.begin(), slots.end(), rng);
    CHECK(j_value(n, slots, p) == doctest::Approx(j).epsilon(1e-9));
  }

  const double step = (hi - lo) / 65536.0;
  std::vector<DensityGrid> grids;
  double product = 1.0;
  for (const auto& s : slots) {
    grids.push_back(slot_density(s, p, step));
    product *= grids.back().total();
  }
  const auto all = convolve_all(grids);
  CHECK(all.total() == doctest::Approx(product).epsilon(1e-5));
  for (double m : all.masses) CHECK(m >= 0.0);
}

TEST_CASE("normalized J stays in a band across an n sweep") {
  double lo = INFINITY;
  double hi = 0;
  for (double n : {1e45, 1e48, 1e51, 1e54}) {
    const auto p = cubes::ParamSet::from_n(2, n);
    const double v = j_normalized(n, desk_tuple(p), p);
    MESSAGE("n=" << n << " J n/(P^s H^{t/3}) = " << v);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  MESSAGE("band [" << lo << ", " << hi << "]");
  CHECK(lo >= 1.0e-6);
  CHECK(hi <= 2.5e-6);
}

TEST_CASE("major arc approximants") {
  // Coupled toy: P^3 = M^3 H.
  const auto p = cubes::ParamSet::toy(2, 30.0, 5.0, 216.0, 0.5);
  const auto ys = smooth::smooth_set(30, p.smooth_bound());
  const double pairs = static_cast<double>(ys.size() * ys.size());
  const auto v0 = eval_major_approx(ApproxMode::V, 0.0, 0, 1, p);
  CHECK(v0.value.real() == doctest::Approx(pairs * 15.0).epsilon(1e-9));
  CHECK(std::abs(v0.value.imag()) < 1e-6);

  const auto h = expsums::Generator::from_params(expsums::GenMode::h, p);
  const auto W = expsums::Generator::from_params(expsums::GenMode::W, p);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double worst_v = 0;
  double worst_w = 0;
  for (int i = 0; i < 40; ++i) {
    const u64 q = std::vector<u64>{1, 2, 4, 7, 8}[rng() % 5];
    u64 a = rng() % q;
    while (std::gcd(a, q) != 1) a = (a + 1) % q;
    const double width = std::max(1.0, std::cbrt(p.H) / (6.0 * p.k)) / (static_cast<double>(q) * p.n);
    double alpha = static_cast<double>(a) / static_cast<double>(q) + unif(rng) * width;
    const double scale = std::pow(static_cast<double>(q), 1.01) * expsums::w_weight(core::factorize(q), p.k);
    const auto V = eval_major_approx(ApproxMode::V, alpha, a, q, p);
    worst_v = std::max(worst_v, std::abs(h(alpha) - V.value) / (scale * p.P * p.P));
    const auto Wa = eval_major_approx(ApproxMode::W, alpha, a, q, p);
    CHECK_FALSE(Wa.prime_divides_q);
    worst_w = std::max(worst_w, std::abs(W(alpha) - Wa.value) / (scale * p.M * std::pow(p.H, 2.0 / 3.0)));
  }
  MESSAGE("max |h - V|/(q^1.01 w P^2) = " << worst_v << ", max |W - W*|/(q^1.01 w M H^2/3) = " << worst_w);
  CHECK(worst_v <= 1.0);
  CHECK(worst_w <= 1.0);
}

TEST_CASE("w(beta)") {
  const u64 n = 200000;
  const auto w0 = w_beta(0.0, n, 30.0, 0.2);
  CHECK(w0.real() > 0.0);
  CHECK(w0.imag() == 0.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const double beta = unif(rng) * 1e-3;
    const auto w = w_beta(beta, n, 30.0, 0.2);
    CHECK(std::abs(w) <= w0.real() * (1 + 1e-12));
    CHECK(std::abs(w_beta(-beta, n, 30.0, 0.2) - std::conj(w)) < 1e-9 * w0.real());
  }
  CHECK_THROWS_AS(w_beta(0.0, 100, 30.0, 0.2), ValidationError);
}

TEST_CASE("decay of v") {
  const auto p = cubes::ParamSet::toy(2, 20.0, 3.0, 6000.0, 0.5);
  const auto scan = decay_scan(p, 9.0, 1e-10, 1e-4, 25);
  MESSAGE("max |v|(1+n|b|)/P = " << scan.max_ratio << " at beta " << scan.argmax_beta);
  CHECK(scan.points.size() == 25);
  CHECK(scan.max_ratio > 0.0);
  CHECK(scan.max_ratio <= 1.0);
}
