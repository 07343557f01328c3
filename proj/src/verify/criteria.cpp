#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "cubewaring/analytic.hpp"
#include "cubewaring/cubes.hpp"
#include "cubewaring/expsums.hpp"
#include "cubewaring/io.hpp"
#include "cubewaring/local.hpp"
#include "cubewaring/search.hpp"
#include "cubewaring/smooth.hpp"
#include "cubewaring/verify.hpp"

namespace cubewaring::verify {
namespace {

using core::u128;
using core::u64;

template <class... Parts>
std::string cat(const Parts&... parts) {
  std::ostringstream s;
  s << std::setprecision(6);
  (s << ... << parts);
  return s.str();
}

u64 cube_sum(u64 a, u64 b, u64 c) { return a * a * a + b * b * b + c * c * c; }

u64 ipow(u64 b, unsigned k) {
  u64 v = 1;
  for (unsigned i = 0; i < k; ++i) v *= b;
  return v;
}

Outcome residues_mod9() {
  const std::vector<u64> expect{0, 1, 2, 3, 6, 7, 8};
  const auto exact = cubes::c_residues(9);
  const auto cache = cubes::build_cube_cache(1'000'000, false);
  const auto scanned = cubes::c_residues(9, cache);
  const bool ok = exact.members() == expect && scanned.members() == expect;
  return {ok, cat("exact ", exact.size(), " classes, cache scan ", scanned.size(), " classes; missing 4, 5")};
}

Outcome tsets_27() {
  u64 bad = 0;
  for (u64 j = 0; j < 27; ++j) {
    const auto t = local::t_sets(1 + 27 * j, 27, 2);
    if (t.T_k.members() != std::vector<u64>{0, 1, 4, 13, 22} || t.T_star.size() != 3) ++bad;
  }
  return {bad == 0, cat("27 classes C = 1 + 27j, ", bad, " mismatches")};
}

Outcome squares_bound() {
  bool ok = true;
  std::string detail;
  for (unsigned j : {0U, 1U}) {
    const auto r = search::verify_squares_lower_bound(j);
    ok = ok && r.certified();
    detail += cat(j == 0 ? "" : "; ", "j=", j, ": ", r.solutions.size(), " solution(s) of ", r.target,
                  ", base ", r.base, " ≡ ", r.base_mod9, " mod 9", r.residue_excluded ? " excluded" : " NOT excluded");
  }
  return {ok, detail};
}

Outcome solubility() {
  const auto a = local::congruence_soluble(6, 8, 8, true);
  const auto b = local::congruence_soluble(9, 17, 243, true);
  return {a.all() && b.all(), cat("mod 8: ", a.all() ? "all" : "not all", ", mod 243: ", b.all() ? "all" : "not all")};
}

Outcome coverage81() {
  const auto r = search::quartic_residue_coverage();
  u64 witnessed = 0;
  for (u64 res = 0; res < r.modulus; ++res) {
    const auto& w = r.witnesses[res];
    if (w.size() != r.summands) continue;
    u64 sum = 0;
    for (const auto& t : w) {
      sum += core::powmod(cube_sum(t.p * t.x[0], t.p * t.x[1], t.p * t.x[2]) % 81, 4, 81);
    }
    witnessed += sum % 81 == res;
  }
  return {r.covered() && witnessed == r.modulus,
          cat("base ", r.base.size(), " residues, 11-fold sumset ", r.layer_sizes.back(), "/81, ", witnessed,
              " checked witnesses")};
}

Outcome gauss_modulus() {
  double worst = 0;
  u64 sums = 0;
  for (u64 p : core::sieve_primes(997)) {
    if (p == 2) continue;
    const expsums::PhaseTable e(p);
    const double root = std::sqrt(static_cast<double>(p));
    for (u64 a = 1; a < p; ++a) {
      worst = std::max(worst, std::abs(std::abs(expsums::gauss_power_sum(e, a, 2)) - root));
      ++sums;
    }
  }
  return {worst < 1e-6, cat(sums, " sums, max ||S| - √p| = ", worst)};
}

Outcome orthogonality() {
  std::mt19937_64 rng(9);
  double worst = 0;
  u64 checks = 0;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL}) {
    for (unsigned k : {2U, 3U, 4U}) {
      for (unsigned arity = 1; arity <= 4; ++arity) {
        std::vector<expsums::Slot> slots(arity);
        for (auto& s : slots) s = {rng() % 10000, rng() % 2 == 0 ? u64{1} : u64{11}};
        const u64 n = rng() % 100000;
        double partial = 0;
        u64 q = 1;
        for (unsigned h = 0; h <= local::gamma_depth(p, k) + 2; ++h, q *= p) {
          partial += expsums::product_sum(q, slots, n, k).value;
          const auto count = static_cast<long double>(local::count_solutions_mod(slots, k, n, p, h));
          const double rhs = static_cast<double>(count / std::pow(static_cast<long double>(q), arity - 1));
          worst = std::max(worst, std::abs(partial - rhs) / std::max(1.0, std::abs(rhs)));
          ++checks;
        }
      }
    }
  }
  return {worst < 1e-8, cat(checks, " (p, k, arity, h) cases, worst relative deviation ", worst)};
}

Outcome dickman() {
  const double rho2 = smooth::dickman_rho(2.0);
  const double err = std::abs(rho2 - (1.0 - std::numbers::ln2));
  const auto psi = smooth::psi_ratio_report(1'000'000, 2.0);
  const double rel = std::abs(psi.ratio / rho2 - 1.0);
  return {err < 1e-8 && rel <= 0.05 && psi.R == 1000,
          cat("|ρ(2) - (1 - ln 2)| = ", err, ", Ψ(10^6, 10^3)/10^6 = ", psi.ratio, " (", rel * 100,
              "% from ρ(2), ", std::abs(psi.ratio - rho2) * 100, " points)")};
}

std::vector<analytic::Shift> desk_tuple(const cubes::ParamSet& p) {
  const auto pow2_below = [](double x) {
    double y = 1;
    while (2 * y <= x) y *= 2;
    return y;
  };
  const double y = pow2_below(p.P / 2.0);
  const double z = pow2_below(p.H3);
  const auto primes = core::primes_in_range(p.M / 2.0, 0.51 * p.M);
  if (primes.empty()) throw std::runtime_error("desk tuple: no prime near M/2");
  return {{2.0, 1},
          {y * y * y + 1.0, 1},
          {2.0 * y * y * y, 1},
          {y * y * y / 8.0 + 8.0, 1},
          {2.0, primes.front()},
          {z * z * z + 1.0, primes.front()},
          {2.0 * z * z * z, primes.back()},
          {z * z * z / 8.0, primes.back()}};
}

Outcome v_identity_and_j() {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double worst = 0;
  bool accurate = true;
  for (int i = 0; i < 50; ++i) {
    const int k = 2 + static_cast<int>(rng() % 3);
    const auto params = cubes::ParamSet::toy(k, 20.0, 3.0, 6000.0, 0.5);
    const double C = static_cast<double>(rng() % 2000);
    const bool scaled = i % 2 == 1;
    const u64 prime = scaled ? 3 : 1;
    const auto lim = analytic::density_limits({C, prime}, params);
    const double beta = unif(rng) * 40.0 / (lim.hi - lim.lo);
    const auto mode = scaled ? analytic::VMode::scaled : analytic::VMode::plain;
    const auto x = analytic::v_integral(mode, beta, C, prime, params);
    const auto g = analytic::v_integral_gamma(mode, beta, C, prime, params);
    accurate = accurate && x.accurate && g.accurate;
    worst = std::max(worst, std::abs(g.value - x.value) / std::abs(x.value));
  }
  const auto p = cubes::ParamSet::from_n(2, 1e48);
  const auto slots = desk_tuple(p);
  const double fine = analytic::j_value(p.n, slots, p);
  const double coarse = analytic::j_value(p.n, slots, p, analytic::kDefaultBins / 2);
  const double change = std::abs(fine - coarse) / fine;
  return {accurate && worst < 1e-6 && fine > 0.0 && change < 1e-3,
          cat("50 triples, worst relative deviation ", worst, "; J doubling change ", change)};
}

// Value lists of h and W straight from the definitions of the tuple sets.
std::vector<u64> h_values(const cubes::ParamSet& p) {
  const auto ys = smooth::smooth_set(static_cast<u64>(p.P), p.smooth_bound());
  std::vector<u64> out;
  for (u64 x = static_cast<u64>(std::ceil(p.P / 2.0)); x <= static_cast<u64>(p.P); ++x)
    for (u64 y1 : ys.members)
      for (u64 y2 : ys.members) out.push_back(ipow(cube_sum(x, y1, y2), static_cast<unsigned>(p.k)));
  return out;
}

std::vector<u64> W_values(const cubes::ParamSet& p) {
  const auto ys = smooth::smooth_set(static_cast<u64>(p.H3), p.smooth_bound());
  std::vector<u64> out;
  for (u64 q : core::primes_in_range(p.M / 2.0, p.M))
    for (u64 y = static_cast<u64>(std::ceil(p.H1 - 1e-9)); static_cast<double>(y) <= p.H2 + 1e-9; ++y)
      for (u64 y1 : ys.members)
        for (u64 y2 : ys.members) out.push_back(ipow(q * q * q * cube_sum(y, y1, y2), static_cast<unsigned>(p.k)));
  return out;
}

Outcome toy_exactness() {
  const auto p = cubes::ParamSet::toy(2, 8.0, 3.0, 54.0, 0.5);
  const auto hv = h_values(p);
  const auto wv = W_values(p);
  std::mt19937_64 rng(10);
  u64 cases = 0;
  u64 exact_mismatch = 0;
  double worst = 0;
  for (const search::RepShape shape : {search::RepShape{1, 1, 0}, search::RepShape{2, 1, 0},
                                       search::RepShape{0, 2, 0}, search::RepShape{1, 2, 0}}) {
    std::vector<const std::vector<u64>*> lists;
    for (unsigned i = 0; i < shape.plain; ++i) lists.push_back(&hv);
    for (unsigned i = 0; i < shape.scaled; ++i) lists.push_back(&wv);
    std::map<u64, u64> direct;
    std::function<void(std::size_t, u64)> walk = [&](std::size_t i, u64 acc) {
      if (i == lists.size()) {
        ++direct[acc];
        return;
      }
      for (u64 v : *lists[i]) walk(i + 1, acc + v);
    };
    walk(0, 0);
    const auto factors = search::rep_factors(shape, p);
    std::vector<u128> ns;
    std::vector<u64> exact;
    for (int i = 0; i < 10; ++i) {
      const u64 n = std::next(direct.begin(), static_cast<long>(rng() % direct.size()))->first + (i % 4 == 3);
      const u64 want = direct.count(n) ? direct[n] : 0;
      exact.push_back(search::rep_count(factors, n));
      exact_mismatch += exact.back() != want;
      ns.push_back(n);
      ++cases;
    }
    const auto fourier = search::rep_count_fourier(factors, ns);
    for (std::size_t i = 0; i < ns.size(); ++i) {
      worst = std::max(worst, std::abs(fourier[i] - static_cast<double>(exact[i])));
    }
  }
  return {exact_mismatch == 0 && worst < 0.5,
          cat(cases, " (shape, n) cases at P=8, ", exact_mismatch, " exact mismatches, worst |Fourier - exact| ",
              worst)};
}

Outcome congruence_1888() {
  std::vector<u64> vals;
  for (u64 x = 1; x <= 2; ++x)
    for (u64 y = 1; y <= 2; ++y)
      for (u64 z = 1; z <= 2; ++z) vals.push_back(cube_sum(x, y, z) * cube_sum(x, y, z) % 3);
  u64 oracle = 0;
  for (u64 v1 : vals)
    for (u64 v2 : vals)
      for (u64 v3 : vals)
        for (u64 v4 : vals) oracle += (v1 + v2) % 3 == (v3 + v4) % 3 ? 1 : 0;
  const u128 got = expsums::congruence_count(expsums::CountMode::R, 3, cubes::ParamSet::toy(2, 2.0, 2.0, 8.0, 1.0));
  return {oracle == 1888 && got == 1888, cat("count ", core::to_string(got), ", 4096-tuple oracle ", oracle)};
}

Outcome gauss_bound_scans() {
  const double pinned[] = {std::sqrt(2.0), 1.0 + 2.0 * std::cos(2.0 * std::numbers::pi / 9.0),
                           2.0 * std::cos(std::numbers::pi / 16.0)};
  bool ok = true;
  std::string detail;
  for (unsigned k : {2U, 3U, 4U}) {
    const auto s = expsums::gauss_bound_scan(k, 10000);
    ok = ok && s.max_ratio <= 4.0 && s.max_ratio <= pinned[k - 2] * (1 + 1e-9);
    detail += cat(k == 2 ? "" : "; ", "k=", k, " max ", s.max_ratio, " at q=", s.argmax_q, " (pin ", pinned[k - 2], ")");
  }
  return {ok, detail};
}

Outcome g3_evidence() {
  const auto cache = cubes::build_cube_cache(1000, false);
  const auto t = search::minimal_s_table(2, 1'000'000, 12, cache);
  const auto tail = t.tail(100'000, 8);
  return {tail.ok(), cat("max s_min on [10^5, 10^6] = ", tail.max_s, ", ", tail.exceeding,
                         " above 8; onset of s_min <= 8: ", tail.onset)};
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "residues of C mod 9", 1.0, residues_mod9},
      {2, "T sets at 27", 1.0, tsets_27},
      {3, "squares lower bound", 10.0, squares_bound},
      {4, "congruence solubility mod 8 and 243", 5.0, solubility},
      {5, "quartic coverage mod 81", 30.0, coverage81},
      {6, "Gauss sum modulus", 5.0, gauss_modulus},
      {7, "local orthogonality identity", 60.0, orthogonality},
      {8, "Dickman rho", 10.0, dickman},
      {9, "v change of variables and J refinement", 60.0, v_identity_and_j},
      {10, "toy-scale exact counts", 60.0, toy_exactness},
      {11, "congruence count 1888", 1.0, congruence_1888},
      {12, "Gauss bound scans pinned", 120.0, gauss_bound_scans},
      {13, "empirical G3(2) evidence", 120.0, g3_evidence},
  };
  return all;
}

CriterionResult run(const Criterion& c) {
  CriterionResult r;
  r.id = c.id;
  r.name = c.name;
  r.budget_seconds = c.budget_seconds;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Outcome o = c.run();
    r.passed = o.passed;
    r.detail = o.detail;
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_all(std::span<const int> only) {
  std::vector<CriterionResult> out;
  for (const auto& c : criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    out.push_back(run(c));
  }
  return out;
}

void print_line(std::ostream& out, const CriterionResult& r) {
  out << (r.ok() ? "PASS" : "FAIL") << "  " << std::setw(2) << r.id << "  " << std::left << std::setw(40)
      << r.name << std::right << "  " << std::fixed << std::setprecision(3) << std::setw(8) << r.seconds
      << " s / " << std::setprecision(0) << r.budget_seconds << " s" << std::defaultfloat
      << (r.within_budget() ? "" : " (over budget)") << "  " << r.detail << '\n';
}

nlohmann::json to_json(std::span<const CriterionResult> results) {
  auto doc = io::document("verify");
  auto rows = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    rows.push_back({{"id", r.id},
                    {"name", r.name},
                    {"passed", r.passed},
                    {"seconds", r.seconds},
                    {"budget_seconds", r.budget_seconds},
                    {"within_budget", r.within_budget()},
                    {"detail", r.detail}});
    all = all && r.ok();
  }
  doc["criteria"] = rows;
  doc["all_passed"] = all;
  return doc;
}

}  // namespace cubewaring::verify
