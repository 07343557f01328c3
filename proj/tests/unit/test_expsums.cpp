#include <cmath>
#include <numbers>
#include <random>

#include "cubewaring/error.hpp"
#include "cubewaring/expsums.hpp"
#include "doctest.h"

using namespace cubewaring;
using namespace cubewaring::expsums;
using core::u64;

namespace {

// e(x) from a long double angle; only for small integer arguments.
Complex e_ld(long double x) {
  const long double f = x - std::floor(x);
  const long double angle = 2.0L * std::numbers::pi_v<long double> * f;
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

u64 T(u64 a, u64 b, u64 c) { return a * a * a + b * b * b + c * c * c; }

}  // namespace

TEST_CASE("gauss_power_sum examples") {
  for (unsigned k : {2U, 3U, 4U}) CHECK(gauss_power_sum(1, 0, k) == Complex(1.0, 0.0));
  CHECK(rel(gauss_power_sum(4, 1, 2), {2.0, 2.0}) < 1e-14);
  CHECK(std::abs(std::abs(gauss_power_sum(5, 1, 2)) - std::sqrt(5.0)) < 1e-10);
  CHECK_THROWS_AS(gauss_power_sum(0, 1, 2), ValidationError);
}

TEST_CASE("quadratic Gauss sums have modulus sqrt(p) for every odd p <= 997") {
  double worst = 0;
  for (u64 p : core::sieve_primes(997)) {
    if (p == 2) continue;
    const PhaseTable e(p);
    for (u64 a = 1; a < p; ++a) {
      const double mod = std::abs(gauss_power_sum(e, a, 2));
      worst = std::max(worst, std::abs(mod - std::sqrt(static_cast<double>(p))) / std::sqrt(static_cast<double>(p)));
    }
  }
  MESSAGE("worst relative deviation " << worst);
  CHECK(worst < 1e-9);
}

TEST_CASE("tau_k and w_k tables") {
  using core::factorize;
  CHECK(tau_weight(factorize(16), 2) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(tau_weight(factorize(7), 3) == doctest::Approx(3.0 / std::sqrt(7.0)).epsilon(1e-15));
  CHECK(tau_weight(factorize(9), 3) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(tau_weight(factorize(1), 4) == 1.0);
  // u = 1, v = 1 and u = 1, v = 4 for k = 4.
  CHECK(tau_weight(factorize(32), 4) == doctest::Approx(4.0 * std::pow(2.0, -1.5)));
  CHECK(tau_weight(factorize(256), 4) == doctest::Approx(0.25));
  CHECK(w_weight(factorize(2), 2) == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-15));
  CHECK(w_weight(factorize(8), 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(w_weight(factorize(128), 2) == doctest::Approx(std::pow(2.0, -7.0 / 6.0)).epsilon(1e-15));
  CHECK(w_weight(factorize(64), 2) == doctest::Approx(0.5));
  // Multiplicativity over coprime parts.
  for (int k = 2; k <= 4; ++k) {
    CHECK(tau_weight(factorize(72 * 25), k) ==
          doctest::Approx(tau_weight(factorize(72), k) * tau_weight(factorize(25), k)));
    CHECK(w_weight(factorize(72 * 25), k) ==
          doctest::Approx(w_weight(factorize(72), k) * w_weight(factorize(25), k)));
  }
  CHECK_THROWS_AS(tau_weight(factorize(5), 5), ValidationError);
}

TEST_CASE("shifted sums") {
  CHECK(shifted_sum(1, 0, 0, 5, 2) == Complex(1.0, 0.0));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const u64 q = rng() % 200 + 1;
    const u64 a = rng() % q;
    const u64 C = rng();
    const Complex x = shifted_sum(q, a, 0, C, 2);
    const Complex y = cube_shift_sum(q, a, C, 2);
    CHECK(x.real() == y.real());
    CHECK(x.imag() == y.imag());
  }
  // Against the defining sum with the shift kept unreduced.
  for (u64 C : {1ULL, 28ULL, 55ULL, 82ULL}) {
    Complex direct = 0;
    for (u64 r = 1; r <= 27; ++r) {
      const long double v = std::pow(static_cast<long double>(r * r * r + C), 2);
      direct += e_ld(std::fmod(v, 27.0L) / 27.0L);
    }
    const Complex s = shifted_sum(27, 1, 0, C, 2);
    CHECK(rel(s, direct) < 1e-12);
    CHECK(std::abs(s) <= 4.0 * 27.0 * w_weight(core::factorize(27), 2));
  }
}

TEST_CASE("product_sum: trivial modulus, flag, reality and multiplicativity") {
  const std::vector<Slot> slots{{1, 1}, {9, 1}, {2, 7}};
  const auto one = product_sum(1, slots, 5, 2);
  CHECK(one.value == 1.0);
  CHECK_FALSE(one.prime_divides_q);
  CHECK(product_sum(14, slots, 5, 2).prime_divides_q);
  CHECK_FALSE(product_sum(15, slots, 5, 2).prime_divides_q);

  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const u64 q = rng() % 120 + 2;
    std::vector<Slot> ys(rng() % 4 + 1);
    for (auto& s : ys) s = {rng() % 1000, (rng() % 2 == 0) ? u64{1} : u64{5}};
    const auto ps = product_sum(q, ys, rng() % 10000, 2 + rng() % 2);
    CHECK(ps.imag_residue <= 1e-9 * std::max(1.0, std::abs(ps.value)));
  }

  for (const auto& [q1, q2] : std::vector<std::pair<u64, u64>>{{4, 9}, {8, 27}, {5, 7}, {7, 16}, {9, 25}}) {
    for (unsigned k : {2U, 3U}) {
      const std::vector<Slot> ys{{28, 1}, {136, 1}, {1, 11}};
      const double a = product_sum(q1, ys, 1234, k).value;
      const double b = product_sum(q2, ys, 1234, k).value;
      const double ab = product_sum(q1 * q2, ys, 1234, k).value;
      CHECK(std::abs(ab - a * b) <= 1e-9 * std::max(1.0, std::abs(ab)));
    }
  }
}

TEST_CASE("exact phases for huge arguments") {
  // α = j/2^40 is exact, so e(αN) = e((jN mod 2^40)/2^40).
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    const u64 j = rng() & ((u64{1} << 40U) - 1);
    const u128 N = (static_cast<u128>(rng()) << 26U) ^ rng();  // about 2^90
    const double alpha = std::ldexp(static_cast<double>(j), -40);
    const u64 num = static_cast<u64>((static_cast<u128>(j) * N) & ((u128{1} << 40U) - 1));
    const Complex want = e_ld(std::ldexp(static_cast<long double>(num), -40));
    CHECK(std::abs(exact_phase(alpha, N) - want) < 1e-12);
    CHECK(std::abs(exact_phase(-alpha, N) - std::conj(want)) < 1e-12);
  }
}

TEST_CASE("generating functions") {
  const auto p = cubes::ParamSet::toy(2, 12.0, 12.0, 6000.0, 0.5);
  const auto a = cubes::build_weights(p, cubes::WeightMode::a);
  const auto h = Generator::h(a, 2);
  CHECK(h(0.0) == Complex(static_cast<double>(a.mass()), 0.0));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const double alpha = unif(rng);
    CHECK(rel(h(-alpha), std::conj(h(alpha))) < 1e-12);
    // Oracle: x^2 <= (3·12^3)^2 fits long double exactly.
    Complex direct = 0;
    for (const auto& [x, m] : a.entries) {
      const long double v = static_cast<long double>(x) * x;
      direct += static_cast<double>(m) * e_ld(std::fmod(v * alpha, 1.0L));
    }
    CHECK(rel(h(alpha), direct) < 1e-9);
  }
  const auto W = Generator::from_params(GenMode::W, p);
  const auto b = cubes::build_weights(p, cubes::WeightMode::b);
  const auto primes = core::primes_in_range(6.0, 12.0);
  CHECK(W(0.0).real() == static_cast<double>(primes.size() * b.mass()));
  CHECK(W.mass() == primes.size() * b.mass());

  // f(81α) against the diagonal specialization (3y^3)^4 = 81 y^12.
  const auto ys = smooth::smooth_set(12, 3);
  const auto f12 = Generator::f_twelfth(ys);
  const auto f3 = Generator::f_cube_smooth(ys, 4);
  for (int i = 0; i < 10; ++i) {
    const double alpha = std::ldexp(static_cast<double>(rng() % (1U << 20U)), -20);
    CHECK(rel(f3(alpha), f12(81.0 * alpha)) < 1e-12);
  }
  const std::vector<double> grid{0.1, 0.2, 0.3, 0.7};
  const auto many = h.evaluate(grid, 3);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(many[i] == h(grid[i]));
  CHECK_THROWS_AS(Generator::f_twelfth(smooth::smooth_set(2000, 2000)), OverflowError);
}

TEST_CASE("congruence_count") {
  const auto toy = [](double P) { return cubes::ParamSet::toy(2, P, 2.0, 8.0, 1.0); };
  CHECK(congruence_count(CountMode::R, 2, toy(1.0)) == 1);
  CHECK(congruence_count(CountMode::R, 1, toy(3.0)) == static_cast<u128>(531441) * 1);  // 27^4
  // Oracle: all 8^4 quadruples of triples in [1,2]^3.
  std::vector<u64> vals;
  for (u64 x = 1; x <= 2; ++x)
    for (u64 y = 1; y <= 2; ++y)
      for (u64 z = 1; z <= 2; ++z) vals.push_back(T(x, y, z) * T(x, y, z) % 3);
  u64 oracle = 0;
  for (u64 v1 : vals)
    for (u64 v2 : vals)
      for (u64 v3 : vals)
        for (u64 v4 : vals) oracle += (v1 + v2) % 3 == (v3 + v4) % 3 ? 1 : 0;
  CHECK(oracle == 1888);
  CHECK(congruence_count(CountMode::R, 3, toy(2.0)) == 1888);

  // Mode N against enumeration of T(p x) over a tiny instance.
  const auto pn = cubes::ParamSet::toy(2, 10.0, 7.0, 27.0, 1.0);
  const auto primes = core::primes_in_range(3.5, 7.0);
  for (u64 q : {4ULL, 7ULL, 10ULL}) {
    std::vector<u64> hist(q, 0);
    for (u64 p : primes)
      for (u64 x = 1; x <= 3; ++x)
        for (u64 y = 1; y <= 3; ++y)
          for (u64 z = 1; z <= 3; ++z) {
            const u64 t = T(p * x, p * y, p * z) % q;
            ++hist[t * t % q];
          }
    u128 want = 0;
    for (u64 u = 0; u < q; ++u) {
      u128 d = 0;
      for (u64 v = 0; v < q; ++v) d += static_cast<u128>(hist[v]) * hist[(u + q - v) % q];
      want += d * d;
    }
    CHECK(congruence_count(CountMode::N, q, pn) == want);
  }
  CHECK_THROWS_AS(congruence_count(CountMode::R, 0, toy(2.0)), ValidationError);
  CHECK_THROWS_AS(congruence_count(CountMode::R, 5, toy(500.0)), ResourceError);
}

TEST_CASE("locate_arc examples") {
  const auto big = ArcScheme::major(100.0, 1e6);
  const auto half = locate_arc(0.5, big);
  CHECK(half.inside);
  CHECK(half.a == 1);
  CHECK(half.q == 2);
  const auto third = locate_arc(2.0 / 7.0, big);
  CHECK(third.inside);
  CHECK(third.a == 2);
  CHECK(third.q == 7);
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  CHECK_FALSE(locate_arc(golden, ArcScheme::major(3.0, 1e6)).inside);
  CHECK(locate_arc(0.0, big).q == 1);
  CHECK_THROWS_AS(locate_arc(1.0, big), ValidationError);
}

TEST_CASE("convergent route agrees with a direct scan") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const ArcScheme schemes[] = {ArcScheme::major(50.0, 1e7), ArcScheme::narrow(1e6, 1e5),
                               ArcScheme::major(30.0, 3e4), ArcScheme::major(100.0, 1e3)};
  for (const auto& s : schemes) {
    for (int i = 0; i < 2000; ++i) {
      const double alpha = i < 200 ? static_cast<double>(rng() % 50) / 50.0 + 1e-7 * unif(rng) : unif(rng);
      if (alpha >= 1.0) continue;
      const auto hit = locate_arc(alpha, s);
      bool any = false;
      u64 best_q = 0;
      for (u64 q = 1; q <= s.max_q() && !any; ++q) {
        for (u64 a = 0; a <= q; ++a) {
          if (std::gcd(a, q) != 1) continue;
          if (std::abs(alpha - static_cast<double>(a) / static_cast<double>(q)) <= s.width(q)) {
            any = true;
            best_q = q;
            break;
          }
        }
      }
      CHECK(hit.inside == any);
      if (any) CHECK(hit.q == best_q);
    }
  }
}

TEST_CASE("arc disjointness and upsilon") {
  CHECK(arcs_disjoint(ArcScheme::major(100.0, 1e6)));
  CHECK_FALSE(arcs_disjoint(ArcScheme::major(100.0, 1e4)));
  const auto p = cubes::ParamSet::from_n(2, 1e12);
  CHECK(arcs_disjoint(ArcScheme::script_M(p)));
  CHECK(arcs_disjoint(ArcScheme::major_prime(p)));
  CHECK(upsilon(0.5, p) == doctest::Approx(std::sqrt(0.5)));
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  CHECK(upsilon(golden, p) == 0.0);
}

TEST_CASE("dirichlet approximation") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (double Y : {10.0, 1000.0, 1e6}) {
    for (int i = 0; i < 500; ++i) {
      const double alpha = unif(rng);
      const auto d = dirichlet_approx(alpha, Y);
      CHECK(d.q >= 1);
      CHECK(static_cast<double>(d.q) <= Y);
      CHECK(std::gcd(d.a, d.q) == 1);
      CHECK(std::abs(d.beta) <= 1.0 / (static_cast<double>(d.q) * Y) * (1 + 1e-9));
    }
  }
}

TEST_CASE("gauss bound scan agrees with the brute scan and stays pinned") {
  // Pinned maxima: √2, 1 + 2cos(2π/9) (at 9), 2cos(π/16) (at 16).
  const double pinned[] = {std::sqrt(2.0), 1.0 + 2.0 * std::cos(2.0 * std::numbers::pi / 9.0),
                           2.0 * std::cos(std::numbers::pi / 16.0)};
  for (unsigned k : {2U, 3U, 4U}) {
    const auto fast = gauss_bound_scan(k, 400);
    CHECK(fast.max_ratio == doctest::Approx(gauss_bound_brute(k, 400)).epsilon(1e-12));
    const auto full = gauss_bound_scan(k, 10000);
    MESSAGE("k=" << k << " max=" << full.max_ratio << " at q=" << full.argmax_q);
    CHECK(full.max_ratio <= pinned[k - 2] * (1 + 1e-9));
    CHECK(full.max_ratio >= pinned[k - 2] * (1 - 1e-9));
    CHECK(full.max_ratio <= 4.0);
  }
}

TEST_CASE("shifted sum bound scan") {
  // Exhaustive and sampled routes agree where both run in full.
  const auto exhaustive = shifted_bound_scan(2, 60, 60, 0, 1);
  const auto sampled = shifted_bound_scan(2, 60, 1, 64, 1);
  CHECK(sampled.max_ratio <= exhaustive.max_ratio * (1 + 1e-9));
  for (unsigned k : {2U, 3U, 4U}) {
    const auto s = shifted_bound_scan(k, 3000, 128, 4, 7);
    MESSAGE("k=" << k << " max |S_y|/(q^1.01 w_k) = " << s.max_ratio << " at q=" << s.argmax_q);
    CHECK(s.max_ratio < 60.0);
  }
}

TEST_CASE("minor arc ratio is bounded") {
  const auto p = cubes::ParamSet::toy(2, 30.0, 12.0, 6000.0, 0.5);
  const auto r = minor_arc_report(p, 100, 3);
  CHECK(r.minor == 100);
  MESSAGE("max ratio " << r.max_ratio << " mean " << r.mean_ratio);
  CHECK(r.max_ratio <= 1.0);
  CHECK(r.max_ratio > 0.0);
}
