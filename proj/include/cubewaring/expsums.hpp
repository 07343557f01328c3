#pragma once

// Complete exponential sums S_k(q,a) and S_y(q,a,b), the multiplicative
// weights tau_k and w_k, the product sum S_{Y,p}(q), generating functions
// h, W and f, congruence counts N(q,P) and R(q,P), and the arc schemes.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "cubewaring/core.hpp"
#include "cubewaring/cubes.hpp"
#include "cubewaring/smooth.hpp"

namespace cubewaring::expsums {

using Complex = std::complex<double>;
using core::u128;
using core::u64;

// Blocked pairwise summation.
Complex pairwise_sum(std::span<const Complex> terms);

// e(j/q) for 0 <= j < q.
class PhaseTable {
 public:
  explicit PhaseTable(u64 q);
  [[nodiscard]] u64 modulus() const { return q_; }
  [[nodiscard]] Complex operator[](u64 j) const { return table_[j]; }

 private:
  u64 q_;
  std::vector<Complex> table_;
};

// Σ_{r=1}^{q} e(a r^k / q).
Complex gauss_power_sum(u64 q, u64 a, unsigned k);
Complex gauss_power_sum(const PhaseTable& e, u64 a, unsigned k);

// Σ_{r=1}^{q} e_q(a (r^3 + C)^k + b r). Arguments are reduced mod q first.
Complex shifted_sum(u64 q, u64 a, u64 b, u64 C, unsigned k);

// S_y(q,a) = Σ_{r=1}^{q} e_q(a (r^3 + C)^k), the b = 0 case.
Complex cube_shift_sum(u64 q, u64 a, u64 C, unsigned k);

double tau_weight(const core::FactoredInteger& q, int k);
double w_weight(const core::FactoredInteger& q, int k);

// ---------------------------------------------------------------------------
// S_{Y,p}(q) = q^{-|Y|} Σ_{(a,q)=1} e(-an/q) Π_i S_{C_i}(q, a).

// A slot of the product: shift C, scaled to p^3 C when p > 1.
struct Slot {
  u64 C = 0;
  u64 p = 1;
};

struct ProductSum {
  double value = 0;         // real part
  double imag_residue = 0;  // |imaginary part|
  bool prime_divides_q = false;
};

ProductSum product_sum(u64 q, std::span<const Slot> slots, u64 n, unsigned k);

// Effective shift p^3 C mod m.
u64 slot_shift_mod(const Slot& s, u64 m);

// ---------------------------------------------------------------------------
// Generating functions as Σ mult · e(α · value) over 128-bit values.

enum class GenMode { h, W, f_cube_smooth, f_twelfth };

class Generator {
 public:
  struct Term {
    u128 value = 0;
    u64 mult = 0;
  };

  Generator() = default;
  explicit Generator(std::vector<Term> terms) : terms_(std::move(terms)) {}

  // h: Σ a_x e(α x^k).
  static Generator h(const cubes::WeightMap& a, unsigned k);
  // W: Σ_p Σ_h b_h e(α p^{3k} h^k).
  static Generator W(const cubes::WeightMap& b, std::span<const u64> primes, unsigned k);
  // Σ_{y smooth} e(α (3y^3)^k), the diagonal T(y,y,y).
  static Generator f_cube_smooth(const smooth::SmoothSet& ys, unsigned k);
  // f(α) = Σ_{y smooth} e(α y^12).
  static Generator f_twelfth(const smooth::SmoothSet& ys);

  // Builds the weights / smooth set from the parameters (primes in [M/2, M]).
  static Generator from_params(GenMode mode, const cubes::ParamSet& params);

  [[nodiscard]] Complex operator()(double alpha) const;
  [[nodiscard]] std::vector<Complex> evaluate(std::span<const double> alphas,
                                              unsigned threads = 0) const;

  [[nodiscard]] u64 mass() const;
  [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }

 private:
  std::vector<Term> terms_;
};

Complex eval_generating(GenMode mode, double alpha, const cubes::ParamSet& params);

// e(α·N) with α carried as a 128-bit fixed-point fraction, so the phase is
// exact to about 2^-128·N.
Complex exact_phase(double alpha, u128 N);

// ---------------------------------------------------------------------------
// Congruence counts.

enum class CountMode { N, R };

// R: T(x1)^k + T(x2)^k ≡ T(x3)^k + T(x4)^k (mod q), x_i in [1, P]^3.
// N: the same with T(p_i x_i), x_i in [1, H^{1/3}]^3 and p_i prime in [M/2, M].
u128 congruence_count(CountMode mode, u64 q, const cubes::ParamSet& params);

// Histogram of T(x)^k mod q over x in [1, X]^3, each coordinate scaled by
// `scale` (T(scale·x) = scale^3 T(x)).
std::vector<u64> power_histogram(u64 q, u64 X, unsigned k, u64 scale = 1);

// ---------------------------------------------------------------------------
// Arcs.

enum class ArcKind { major, major_prime, narrow };

struct ArcScheme {
  ArcKind kind = ArcKind::major;
  double height = 1;
  double n = 1;
  double M = 0;  // major_prime only
  int k = 2;     // major_prime only

  // M(X): q <= X, |α - a/q| <= X/(qn).
  static ArcScheme major(double X, double n);
  // M': q <= M^k, |α - a/q| <= M/(q^{1/k} n).
  static ArcScheme major_prime(const cubes::ParamSet& params);
  // P: q <= R, |α - a/q| <= R/n with R = (log P)^{1/5}.
  static ArcScheme narrow(double P, double n);
  // The two dissections of the parameter system: M = M(M^k), N = M(H^{1/3}/6k).
  static ArcScheme script_M(const cubes::ParamSet& params);
  static ArcScheme script_N(const cubes::ParamSet& params);

  [[nodiscard]] double width(u64 q) const;
  [[nodiscard]] u64 max_q() const;
};

struct ArcHit {
  bool inside = false;
  u64 a = 0;
  u64 q = 0;
  double beta = 0;  // α - a/q
};

// Smallest q (then a) with α in the arc around a/q; minor otherwise.
ArcHit locate_arc(double alpha, const ArcScheme& scheme);

// Neighbouring Farey fractions of order max_q() have disjoint arcs.
bool arcs_disjoint(const ArcScheme& scheme);

// τ_k(q)/(1 + n|β|) on script_M(params), 0 on its complement.
double upsilon(double alpha, const cubes::ParamSet& params);

// a/q with q <= Y and |α - a/q| <= 1/(qY) (last convergent with q <= Y).
ArcHit dirichlet_approx(double alpha, double Y);

// ---------------------------------------------------------------------------
// Scans.

struct BoundScan {
  unsigned k = 2;
  u64 q_max = 0;
  double max_ratio = 0;
  u64 argmax_q = 0;
  // Per prime power maxima of the ratio, ascending in the prime power.
  std::vector<std::pair<u64, double>> prime_power_max;
};

// max over q <= q_max, (a,q)=1 of q^{-1}|S_k(q,a)|/τ_k(q). Prime powers are
// scanned over coset representatives of a modulo k-th powers; composite q
// use S_k(q1 q2, a) = S_k(q1, a q2^{k-1}) S_k(q2, a q1^{k-1}).
BoundScan gauss_bound_scan(unsigned k, u64 q_max, unsigned threads = 0);

// Same maximum computed term by term over every (q, a); for small q_max.
double gauss_bound_brute(unsigned k, u64 q_max);

struct ShiftedScan {
  unsigned k = 2;
  u64 q_max = 0;
  u64 exhaustive_limit = 0;
  double max_ratio = 0;  // of |S_y(q,a,b)| / (q^1.01 w_k(q))
  u64 argmax_q = 0;
};

// Prime powers up to `exhaustive_limit` are scanned over every (a, b, C);
// larger prime powers over `samples` random (a, C) with all b.
ShiftedScan shifted_bound_scan(unsigned k, u64 q_max, u64 exhaustive_limit, unsigned samples,
                               u64 seed);

struct MinorArcReport {
  std::size_t samples = 0;
  std::size_t minor = 0;
  double max_ratio = 0;
  double mean_ratio = 0;
};

// |W(α)| against 10·(HM + τ_k(q)HM^2/(1 + M^{3k}H^k|β|))^{1/2}(Σ b_h^2)^{1/2}
// for random α outside script_M, with a/q from Dirichlet at Y = M^k.
MinorArcReport minor_arc_report(const cubes::ParamSet& params, std::size_t samples, u64 seed);

}  // namespace cubewaring::expsums
