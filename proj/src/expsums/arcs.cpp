#include <cmath>
#include <numeric>

#include "cubewaring/error.hpp"
#include "cubewaring/expsums.hpp"

namespace cubewaring::expsums {
namespace {

constexpr u64 kBruteHeight = 10'000'000;
constexpr u64 kFareyHeight = 20'000;

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in [0, 1)");
}

// Continued-fraction convergents a/q of alpha with q <= q_max.
std::vector<std::pair<u64, u64>> convergents(double alpha, u64 q_max) {
  std::vector<std::pair<u64, u64>> out;
  u64 p0 = 1;
  u64 q0 = 0;
  u64 p1 = static_cast<u64>(std::floor(alpha));
  u64 q1 = 1;
  out.emplace_back(p1, q1);
  double x = alpha - std::floor(alpha);
  for (int iter = 0; iter < 64 && x > 1e-15; ++iter) {
    x = 1.0 / x;
    const double a = std::floor(x);
    x -= a;
    if (a > 1e18) break;
    const auto ai = static_cast<u64>(a);
    const u128 p2 = static_cast<u128>(ai) * p1 + p0;
    const u128 q2 = static_cast<u128>(ai) * q1 + q0;
    if (q2 > q_max) break;
    p0 = p1;
    q0 = q1;
    p1 = static_cast<u64>(p2);
    q1 = static_cast<u64>(q2);
    out.emplace_back(p1, q1);
  }
  return out;
}

}  // namespace

ArcScheme ArcScheme::major(double X, double n) {
  if (!(X >= 1.0) || !(n > 0.0)) throw ValidationError("major arcs need X >= 1 and n > 0");
  ArcScheme s;
  s.kind = ArcKind::major;
  s.height = X;
  s.n = n;
  return s;
}

ArcScheme ArcScheme::major_prime(const cubes::ParamSet& params) {
  ArcScheme s;
  s.kind = ArcKind::major_prime;
  s.M = params.M;
  s.k = params.k;
  s.height = std::pow(params.M, params.k);
  s.n = params.n;
  return s;
}

ArcScheme ArcScheme::narrow(double P, double n) {
  if (!(P > 1.0) || !(n > 0.0)) throw ValidationError("narrow arcs need P > 1 and n > 0");
  ArcScheme s;
  s.kind = ArcKind::narrow;
  s.height = std::pow(std::log(P), 0.2);
  s.n = n;
  return s;
}

ArcScheme ArcScheme::script_M(const cubes::ParamSet& params) {
  return major(std::pow(params.M, params.k), params.n);
}

ArcScheme ArcScheme::script_N(const cubes::ParamSet& params) {
  return major(std::max(1.0, std::cbrt(params.H) / (6.0 * params.k)), params.n);
}

double ArcScheme::width(u64 q) const {
  const double qd = static_cast<double>(q);
  switch (kind) {
    case ArcKind::major:
      return height / (qd * n);
    case ArcKind::major_prime:
      return M / (std::pow(qd, 1.0 / k) * n);
    case ArcKind::narrow:
      return height / n;
  }
  return 0.0;
}

u64 ArcScheme::max_q() const { return static_cast<u64>(std::floor(height * (1.0 + 1e-12))); }

ArcHit locate_arc(double alpha, const ArcScheme& scheme) {
  check_alpha(alpha);
  const u64 Q = scheme.max_q();
  ArcHit best;
  if (Q == 0) return best;
  const auto consider = [&](u64 a, u64 q) {
    if (q == 0 || q > Q || a > q || std::gcd(a, q) != 1) return;
    const double beta = alpha - static_cast<double>(a) / static_cast<double>(q);
    if (std::abs(beta) > scheme.width(q)) return;
    if (!best.inside || q < best.q || (q == best.q && a < best.a)) best = {true, a, q, beta};
  };
  // q^2·width(q) grows with q in every scheme, so when 2Q^2·width(Q) <= 1
  // every hit satisfies Legendre's criterion and is a convergent.
  const double Qd = static_cast<double>(Q);
  if (2.0 * Qd * Qd * scheme.width(Q) <= 1.0) {
    for (const auto& [a, q] : convergents(alpha, Q)) consider(a, q);
    consider(1, 1);
    return best;
  }
  if (Q > kBruteHeight) throw ResourceError("locate_arc: height too large for the direct scan");
  for (u64 q = 1; q <= Q; ++q) {
    const auto a = static_cast<u64>(std::floor(alpha * static_cast<double>(q)));
    consider(a, q);
    consider(a + 1, q);
    if (best.inside && best.q <= q) break;
  }
  return best;
}

bool arcs_disjoint(const ArcScheme& scheme) {
  const u64 Q = scheme.max_q();
  if (Q > kFareyHeight) throw ResourceError("arcs_disjoint: Farey order too large");
  if (Q == 0) return true;
  // Farey sequence of order Q by the next-term recurrence.
  u64 a = 0;
  u64 b = 1;
  u64 c = 1;
  u64 d = Q;
  while (true) {
    const double gap = 1.0 / (static_cast<double>(b) * static_cast<double>(d));
    if (scheme.width(b) + scheme.width(d) >= gap) return false;
    if (c == 1 && d == 1) return true;
    const u64 m = (Q + b) / d;
    const u64 e = m * c - a;
    const u64 f = m * d - b;
    a = c;
    b = d;
    c = e;
    d = f;
  }
}

double upsilon(double alpha, const cubes::ParamSet& params) {
  const auto hit = locate_arc(alpha, ArcScheme::script_M(params));
  if (!hit.inside) return 0.0;
  return tau_weight(core::factorize(hit.q), params.k) / (1.0 + params.n * std::abs(hit.beta));
}

ArcHit dirichlet_approx(double alpha, double Y) {
  check_alpha(alpha);
  if (!(Y >= 1.0)) throw ValidationError("dirichlet_approx: Y must be at least 1");
  const auto conv = convergents(alpha, static_cast<u64>(std::floor(Y)));
  const auto [a, q] = conv.back();
  return {true, a, q, alpha - static_cast<double>(a) / static_cast<double>(q)};
}

}  // namespace cubewaring::expsums
