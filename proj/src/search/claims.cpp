#include <algorithm>
#include <map>
#include <tuple>

#include "cubewaring/error.hpp"
#include "cubewaring/search.hpp"

namespace cubewaring::search {
namespace {

u64 permutations_of(const std::array<u64, 4>& q) {
  u64 denom = 1;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= 4; ++i) {
    if (i < 4 && q[i] == q[i - 1]) {
      ++run;
    } else {
      for (std::size_t f = 2; f <= run; ++f) denom *= f;
      run = 1;
    }
  }
  return 24 / denom;
}

}  // namespace

SquaresReport verify_squares_lower_bound(unsigned j) {
  if (j > 1) throw ValidationError("verify_squares_lower_bound: j must be 0 or 1");
  SquaresReport r;
  r.j = j;
  r.target = u64{1} << (6U + 12U * j);
  r.base = u64{1} << (2U + 6U * j);
  r.base_mod9 = r.base % 9;
  r.residue_excluded = !cubes::c_residues(9).contains(r.base_mod9);

  // Pairs a <= b with room for two more positive squares, keyed by a^2 + b^2.
  struct Pair {
    u64 sum, a, b;
  };
  std::vector<Pair> pairs;
  const u64 top = core::iroot(r.target, 2);
  for (u64 a = 1; a <= top; ++a) {
    for (u64 b = a; b <= top; ++b) {
      const u64 s = a * a + b * b;
      if (s + 2 > r.target) break;
      pairs.push_back({s, a, b});
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const Pair& x, const Pair& y) { return std::tie(x.sum, x.a) < std::tie(y.sum, y.a); });
  for (const Pair& lo : pairs) {
    const u64 rest = r.target - lo.sum;
    auto it = std::lower_bound(pairs.begin(), pairs.end(), rest,
                               [](const Pair& p, u64 v) { return p.sum < v; });
    for (; it != pairs.end() && it->sum == rest; ++it) {
      if (it->a < lo.b) continue;
      const std::array<u64, 4> q{lo.a, lo.b, it->a, it->b};
      r.solutions.push_back(q);
      r.ordered_solutions += permutations_of(q);
    }
  }
  std::sort(r.solutions.begin(), r.solutions.end());
  return r;
}

CoverageReport quartic_residue_coverage(bool primes_only) {
  constexpr u64 m = 81;
  CoverageReport rep;
  rep.modulus = m;
  rep.summands = 11;

  // Lexicographically first x with T(x) ≡ t.
  std::vector<std::optional<std::array<u64, 3>>> first_x(m);
  for (u64 a = 1; a <= m; ++a) {
    for (u64 b = 1; b <= m; ++b) {
      for (u64 c = 1; c <= m; ++c) {
        const u64 t = (a * a * a + b * b * b + c * c * c) % m;
        if (!first_x[t]) first_x[t] = std::array<u64, 3>{a, b, c};
      }
    }
  }
  std::vector<std::optional<CoverageTerm>> base(m);
  for (u64 p = 1; p <= m; ++p) {
    if (primes_only && !core::is_prime(p)) continue;
    const u64 p3 = p * p * p % m;
    for (u64 t = 0; t < m; ++t) {
      if (!first_x[t]) continue;
      const u64 r = core::powmod(p3 * t % m, 4, m);
      const CoverageTerm cand{p, *first_x[t], r};
      auto& slot = base[r];
      if (!slot || std::tie(cand.p, cand.x) < std::tie(slot->p, slot->x)) slot = cand;
    }
  }
  for (u64 r = 0; r < m; ++r) {
    if (base[r]) rep.base.push_back(r);
  }

  // parent[j][r]: (residue of the j-fold sum, base residue) reaching r.
  using Parent = std::optional<std::pair<u64, u64>>;
  std::vector<std::vector<Parent>> parent(rep.summands + 1, std::vector<Parent>(m));
  std::vector<bool> reach(m, false);
  for (u64 b : rep.base) {
    reach[b] = true;
    parent[1][b] = std::pair<u64, u64>{0, b};
  }
  rep.layer_sizes.push_back(rep.base.size());
  for (unsigned j = 2; j <= rep.summands; ++j) {
    std::vector<bool> next(m, false);
    for (u64 r = 0; r < m; ++r) {
      if (!reach[r]) continue;
      for (u64 b : rep.base) {
        const u64 v = (r + b) % m;
        if (!next[v]) {
          next[v] = true;
          parent[j][v] = std::pair<u64, u64>{r, b};
        }
      }
    }
    reach.swap(next);
    rep.layer_sizes.push_back(static_cast<u64>(std::count(reach.begin(), reach.end(), true)));
  }

  rep.witnesses.assign(m, {});
  for (u64 r = 0; r < m; ++r) {
    if (!reach[r]) continue;
    u64 cur = r;
    for (unsigned j = rep.summands; j >= 1; --j) {
      const auto [prev, b] = *parent[j][cur];
      rep.witnesses[r].push_back(*base[b]);
      cur = prev;
    }
    std::reverse(rep.witnesses[r].begin(), rep.witnesses[r].end());
  }
  return rep;
}

}  // namespace cubewaring::search
