// cubewaring command-line front end.
//
// Exit codes: 0 success, 2 invalid input (including unknown flags), 3 over a
// resource budget, 1 when `verify` finds a failing criterion.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cubewaring/analytic.hpp"
#include "cubewaring/cubes.hpp"
#include "cubewaring/error.hpp"
#include "cubewaring/expsums.hpp"
#include "cubewaring/io.hpp"
#include "cubewaring/local.hpp"
#include "cubewaring/search.hpp"
#include "cubewaring/smooth.hpp"
#include "cubewaring/verify.hpp"

namespace {

using namespace cubewaring;
using core::u128;
using core::u64;
using io::Json;

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitValidation = 2;
constexpr int kExitResource = 3;

struct Globals {
  std::string format = "csv";
  unsigned threads = 0;
  std::string cache_dir;
  [[nodiscard]] bool json() const { return format == "json"; }
};

struct ParamOpts {
  int k = 2;
  std::optional<double> n;
  std::optional<double> P;
  std::optional<double> M;
  std::optional<double> H;
  double eta = 0.1;

  void add(CLI::App* sub) {
    sub->add_option("--k", k, "exponent k")->check(CLI::Range(2, 4));
    sub->add_option("--n", n, "target n (sets P = n^(1/3k))");
    sub->add_option("--P", P, "P directly");
    sub->add_option("--M", M, "toy M (with --P and --H)");
    sub->add_option("--H", H, "toy H (with --P and --M)");
    sub->add_option("--eta", eta, "smoothness exponent");
  }

  [[nodiscard]] cubes::ParamSet build() const {
    if (M || H) {
      if (!(M && H && P)) throw ValidationError("toy parameters need --P, --M and --H together");
      return cubes::ParamSet::toy(k, *P, *M, *H, eta);
    }
    if (P) return cubes::ParamSet::from_P(k, *P, eta);
    if (n) return cubes::ParamSet::from_n(k, *n, eta);
    throw ValidationError("parameters need --n, --P, or --P --M --H");
  }
};

// "C:p,C:p,..." with p defaulting to 1.
std::vector<expsums::Slot> parse_slots(const std::string& text) {
  std::vector<expsums::Slot> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    try {
      expsums::Slot s;
      s.C = std::stoull(item.substr(0, colon));
      if (colon != std::string::npos) s.p = std::stoull(item.substr(colon + 1));
      out.push_back(s);
    } catch (const std::logic_error&) {
      throw ValidationError("bad slot '" + item + "', expected C or C:p");
    }
  }
  if (out.empty()) throw ValidationError("at least one slot is required");
  return out;
}

std::vector<analytic::Shift> to_shifts(const std::vector<expsums::Slot>& slots) {
  std::vector<analytic::Shift> out;
  for (const auto& s : slots) out.push_back({static_cast<double>(s.C), s.p});
  return out;
}

Json complex_json(expsums::Complex z) { return {{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}}; }

class Runner {
 public:
  explicit Runner(const Globals& g) : g_(g), csv_(std::cout) {}

  void emit(const std::string& kind, Json body) const {
    Json doc = io::document(kind);
    doc.update(body);
    std::cout << doc.dump(2) << '\n';
  }
  void complex(const std::string& kind, expsums::Complex z) {
    if (g_.json()) {
      emit(kind, complex_json(z));
    } else {
      csv_.row(z.real(), z.imag(), std::abs(z));
    }
  }
  [[nodiscard]] bool json() const { return g_.json(); }
  [[nodiscard]] unsigned threads() const { return g_.threads; }
  [[nodiscard]] std::optional<std::filesystem::path> cache_flag() const {
    if (g_.cache_dir.empty()) return std::nullopt;
    return std::filesystem::path(g_.cache_dir);
  }
  io::CsvWriter& csv() { return csv_; }

 private:
  const Globals& g_;
  io::CsvWriter csv_;
};

// ---------------------------------------------------------------------------

void add_cubes(CLI::App& app, Runner& run) {
  auto* cubes_cmd = app.add_subcommand("cubes", "sums of three cubes");
  cubes_cmd->require_subcommand(1);

  auto* build = cubes_cmd->add_subcommand("build", "build and persist the membership cache");
  static u64 X = 0;
  static bool counts = false;
  build->add_option("--X", X, "limit")->required();
  build->add_flag("--counts", counts, "store ordered counts r3");
  build->callback([&run] {
    const auto dir = io::cache_dir(run.cache_flag());
    const auto r = io::load_or_build(X, counts, dir, run.threads());
    if (run.json()) {
      run.emit("cubes.build", {{"X", r.cache.limit()},
                               {"counts", r.cache.has_counts()},
                               {"members", r.cache.member_count()},
                               {"path", r.path.string()},
                               {"loaded", r.loaded}});
    } else {
      run.csv().row(r.cache.limit(), r.cache.member_count(), r.loaded);
    }
  });

  auto* query = cubes_cmd->add_subcommand("query", "membership and r3 for given n");
  static std::vector<u64> ns;
  query->add_option("--n", ns, "integers to query")->required();
  query->callback([&run] {
    u64 top = 0;
    for (u64 n : ns) top = std::max(top, n);
    cubes::CubeCache cache;
    const auto flag = run.cache_flag();
    if (flag || std::getenv(std::string(io::kCacheDirEnv).c_str()) != nullptr) {
      cache = io::load_or_build(top, true, io::cache_dir(flag), run.threads()).cache;
      if (cache.limit() < top || !cache.has_counts()) cache = cubes::build_cube_cache(top, true, run.threads());
    } else {
      cache = cubes::build_cube_cache(top, true, run.threads());
    }
    Json rows = Json::array();
    for (u64 n : ns) {
      const bool in = cache.contains(n);
      const u64 r3 = n >= 1 ? cache.r3(n) : 0;
      if (run.json()) {
        rows.push_back({{"n", n}, {"in_C", in}, {"r3", r3}});
      } else {
        run.csv().row(n, in, r3);
      }
    }
    if (run.json()) run.emit("cubes.query", {{"rows", rows}});
  });

  auto* residues = cubes_cmd->add_subcommand("residues", "residues of C modulo m");
  static u64 mod = 0;
  static std::string source = "exact";
  static u64 scan_X = 1'000'000;
  residues->add_option("--mod", mod, "modulus")->required()->check(CLI::PositiveNumber);
  residues->add_option("--source", source, "exact or cache")->check(CLI::IsMember({"exact", "cache"}));
  residues->add_option("--X", scan_X, "cache limit for --source cache");
  residues->callback([&run] {
    const auto set = source == "exact" ? cubes::c_residues(mod)
                                       : cubes::c_residues(mod, cubes::build_cube_cache(scan_X, false, run.threads()));
    const auto members = set.members();
    if (run.json()) {
      run.emit("cubes.residues", {{"modulus", mod}, {"source", source}, {"residues", members}});
    } else {
      run.csv().row(std::span<const u64>(members));
    }
  });
}

void add_smooth(CLI::App& app, Runner& run) {
  auto* smooth_cmd = app.add_subcommand("smooth", "smooth numbers and Dickman rho");
  smooth_cmd->require_subcommand(1);

  auto* list = smooth_cmd->add_subcommand("list", "members of A(Y, R)");
  static u64 Y = 0;
  static u64 R = 0;
  list->add_option("--Y", Y)->required();
  list->add_option("--R", R)->required();
  list->callback([&run] {
    const auto s = smooth::smooth_set(Y, R);
    if (run.json()) {
      run.emit("smooth.list", {{"Y", Y}, {"R", R}, {"members", s.members}});
    } else {
      run.csv().row(std::span<const u64>(s.members));
    }
  });

  auto* rho = smooth_cmd->add_subcommand("rho", "Dickman rho(x)");
  static double x = 0;
  rho->add_option("--x", x)->required();
  rho->callback([&run] {
    const double v = smooth::dickman_rho(x);
    if (run.json()) {
      run.emit("smooth.rho", {{"x", x}, {"rho", v}});
    } else {
      run.csv().row(v);
    }
  });

  auto* psi = smooth_cmd->add_subcommand("psi", "Psi(Y, Y^(1/u))/Y against rho(u)");
  static u64 psi_Y = 0;
  static double u = 0;
  psi->add_option("--Y", psi_Y)->required();
  psi->add_option("--u", u)->required();
  psi->callback([&run] {
    const auto r = smooth::psi_ratio_report(psi_Y, u);
    if (run.json()) {
      run.emit("smooth.psi", io::to_json(r));
    } else {
      run.csv().row(r.Y, r.u, r.R, r.psi, r.ratio, r.rho);
    }
  });
}

void add_expsum(CLI::App& app, Runner& run) {
  auto* cmd = app.add_subcommand("expsum", "complete exponential sums and generating functions");
  cmd->require_subcommand(1);

  static u64 q = 1;
  static u64 a = 1;
  static u64 b = 0;
  static u64 C = 0;
  static unsigned k = 2;

  auto* sk = cmd->add_subcommand("sk", "S_k(q, a)");
  sk->add_option("--q", q)->required();
  sk->add_option("--a", a)->required();
  sk->add_option("--k", k);
  sk->callback([&run] { run.complex("expsum.sk", expsums::gauss_power_sum(q, a, k)); });

  auto* sy = cmd->add_subcommand("sy", "S_y(q, a, b) with shift C");
  sy->add_option("--q", q)->required();
  sy->add_option("--a", a)->required();
  sy->add_option("--b", b);
  sy->add_option("--C", C)->required();
  sy->add_option("--k", k);
  sy->callback([&run] { run.complex("expsum.sy", expsums::shifted_sum(q, a, b, C, k)); });

  const auto weight = [&run](const std::string& kind, bool is_tau) {
    const auto f = core::factorize(q);
    const double v = is_tau ? expsums::tau_weight(f, static_cast<int>(k)) : expsums::w_weight(f, static_cast<int>(k));
    if (run.json()) {
      run.emit(kind, {{"q", q}, {"k", k}, {"value", v}});
    } else {
      run.csv().row(q, v);
    }
  };
  auto* w = cmd->add_subcommand("w", "w_k(q)");
  w->add_option("--q", q)->required();
  w->add_option("--k", k);
  w->callback([weight] { weight("expsum.w", false); });
  auto* tau = cmd->add_subcommand("tau", "tau_k(q)");
  tau->add_option("--q", q)->required();
  tau->add_option("--k", k);
  tau->callback([weight] { weight("expsum.tau", true); });

  static ParamOpts eval_params;
  static std::string gen = "h";
  static double alpha = 0;
  auto* eval = cmd->add_subcommand("eval", "generating function at alpha");
  eval->add_option("--fn", gen, "h, W, f or f3")->check(CLI::IsMember({"h", "W", "f", "f3"}));
  eval->add_option("--alpha", alpha)->required();
  eval_params.add(eval);
  eval->callback([&run] {
    const auto mode = gen == "h"   ? expsums::GenMode::h
                      : gen == "W" ? expsums::GenMode::W
                      : gen == "f" ? expsums::GenMode::f_twelfth
                                   : expsums::GenMode::f_cube_smooth;
    run.complex("expsum.eval", expsums::eval_generating(mode, alpha, eval_params.build()));
  });

  static ParamOpts count_params;
  static std::string count_mode = "R";
  auto* count = cmd->add_subcommand("count", "congruence counts R(q, P) or N(q, P)");
  count->add_option("--mode", count_mode)->check(CLI::IsMember({"R", "N"}));
  count->add_option("--q", q)->required();
  count_params.add(count);
  count->callback([&run] {
    const u128 v = expsums::congruence_count(count_mode == "R" ? expsums::CountMode::R : expsums::CountMode::N, q,
                                             count_params.build());
    if (run.json()) {
      run.emit("expsum.count", {{"mode", count_mode}, {"q", q}, {"count", core::to_string(v)}});
    } else {
      run.csv().row(q, v);
    }
  });

  static ParamOpts arc_params;
  static std::string scheme = "M";
  static double height = 0;
  auto* arc = cmd->add_subcommand("arc", "locate alpha in an arc scheme");
  arc->add_option("--alpha", alpha)->required();
  arc->add_option("--scheme", scheme, "major, prime, narrow, M or N")
      ->check(CLI::IsMember({"major", "prime", "narrow", "M", "N"}));
  arc->add_option("--X", height, "height for --scheme major");
  arc_params.add(arc);
  arc->callback([&run] {
    const auto params = arc_params.build();
    expsums::ArcScheme s;
    if (scheme == "major") {
      if (!(height > 0)) throw ValidationError("--scheme major needs --X > 0");
      s = expsums::ArcScheme::major(height, params.n);
    } else if (scheme == "prime") {
      s = expsums::ArcScheme::major_prime(params);
    } else if (scheme == "narrow") {
      s = expsums::ArcScheme::narrow(params.P, params.n);
    } else if (scheme == "M") {
      s = expsums::ArcScheme::script_M(params);
    } else {
      s = expsums::ArcScheme::script_N(params);
    }
    const auto hit = expsums::locate_arc(alpha, s);
    if (run.json()) {
      run.emit("expsum.arc", {{"inside", hit.inside}, {"a", hit.a}, {"q", hit.q}, {"beta", hit.beta}});
    } else {
      run.csv().row(hit.inside, hit.a, hit.q, hit.beta);
    }
  });
}

void add_local(CLI::App& app, Runner& run) {
  auto* cmd = app.add_subcommand("local", "local densities and the singular series");
  cmd->require_subcommand(1);
  static unsigned k = 2;
  static u64 n = 0;
  static std::string slots_text;

  auto* tsets = cmd->add_subcommand("tsets", "the sets T, T* and T_k");
  static u64 C = 0;
  static u64 mod = 0;
  tsets->add_option("--C", C)->required();
  tsets->add_option("--mod", mod)->required();
  tsets->add_option("--k", k);
  tsets->callback([&run] {
    const auto t = local::t_sets(C, mod, k);
    const auto a = t.T.members();
    const auto b = t.T_star.members();
    const auto c = t.T_k.members();
    if (run.json()) {
      run.emit("local.tsets", {{"C", C}, {"modulus", mod}, {"k", k}, {"T", a}, {"T_star", b}, {"T_k", c}});
    } else {
      run.csv().row(std::span<const u64>(a));
      run.csv().row(std::span<const u64>(b));
      run.csv().row(std::span<const u64>(c));
    }
  });

  auto* sigma = cmd->add_subcommand("sigma", "local factor sigma(p)");
  static u64 p = 2;
  sigma->add_option("--p", p)->required();
  sigma->add_option("--slots", slots_text, "C or C:p, comma separated")->required();
  sigma->add_option("--n", n)->required();
  sigma->add_option("--k", k);
  sigma->callback([&run] {
    const auto slots = parse_slots(slots_text);
    const auto f = local::sigma_p(p, slots, n, k);
    if (run.json()) {
      run.emit("local.sigma", io::to_json(f));
    } else {
      run.csv().row(f.p, f.h, f.value, f.stabilized);
    }
  });

  auto* series = cmd->add_subcommand("series", "truncated singular series");
  static u64 Q = 100;
  series->add_option("--slots", slots_text)->required();
  series->add_option("--n", n)->required();
  series->add_option("--k", k);
  series->add_option("--Q", Q);
  series->callback([&run] {
    const auto slots = parse_slots(slots_text);
    const auto r = local::singular_series(slots, n, k, Q, run.threads());
    if (run.json()) {
      run.emit("local.series", io::to_json(r));
    } else {
      run.csv().row(r.value, r.tail_exponent);
    }
  });

  auto* soluble = cmd->add_subcommand("soluble", "solubility of y_1^e + ... + y_v^e ≡ n mod m");
  static unsigned exponent = 2;
  static unsigned vars = 1;
  static bool unit = false;
  soluble->add_option("--exp", exponent)->required();
  soluble->add_option("--vars", vars)->required();
  soluble->add_option("--mod", mod)->required();
  soluble->add_flag("--unit", unit, "require y_1 coprime to m");
  soluble->callback([&run] {
    const auto s = local::congruence_soluble(exponent, vars, mod, unit);
    std::vector<u64> missing;
    for (u64 r = 0; r < s.modulus; ++r)
      if (!s.soluble[r]) missing.push_back(r);
    if (run.json()) {
      run.emit("local.soluble", {{"modulus", s.modulus}, {"all", s.all()}, {"insoluble", missing}});
    } else {
      run.csv().row(s.modulus, s.all());
    }
  });

  auto* quartic = cmd->add_subcommand("quartic", "the series S_m(n)");
  static u64 m = 0;
  quartic->add_option("--m", m)->required();
  quartic->add_option("--n", n)->required();
  quartic->add_option("--Q", Q);
  quartic->callback([&run] {
    const auto s = local::quartic_series(m, n, Q);
    if (run.json()) {
      run.emit("local.quartic", io::to_json(s));
    } else {
      run.csv().row(s.value, s.positive);
    }
  });
}

void add_analytic(CLI::App& app, Runner& run) {
  auto* cmd = app.add_subcommand("analytic", "singular integrals and major arc approximants");
  cmd->require_subcommand(1);
  static ParamOpts params;

  auto* v = cmd->add_subcommand("v", "v_y(beta) or v_{y,p}(beta)");
  static double beta = 0;
  static double C = 0;
  static u64 p = 1;
  v->add_option("--beta", beta)->required();
  v->add_option("--C", C)->required();
  v->add_option("--p", p, "prime for the scaled form");
  params.add(v);
  v->callback([&run] {
    const auto r = analytic::v_integral(p > 1 ? analytic::VMode::scaled : analytic::VMode::plain, beta, C, p,
                                        params.build());
    if (run.json()) {
      Json body = complex_json(r.value);
      body["accurate"] = r.accurate;
      body["panels"] = r.panels;
      run.emit("analytic.v", body);
    } else {
      run.csv().row(r.value.real(), r.value.imag(), r.accurate, static_cast<u64>(r.panels));
    }
  });

  auto* j = cmd->add_subcommand("j", "J(n) for a tuple of slots");
  static std::string slots_text;
  static double target = 0;
  static u64 bins = analytic::kDefaultBins;
  j->add_option("--slots", slots_text, "C or C:p, comma separated")->required();
  j->add_option("--at", target, "evaluation point (default n)");
  j->add_option("--bins", bins);
  params.add(j);
  j->callback([&run] {
    const auto ps = params.build();
    const auto shifts = to_shifts(parse_slots(slots_text));
    const double at = target > 0 ? target : ps.n;
    const double value = analytic::j_value(at, shifts, ps, bins);
    const double normalized = analytic::j_normalized(at, shifts, ps, bins);
    if (run.json()) {
      run.emit("analytic.j", {{"n", at}, {"J", value}, {"normalized", normalized}});
    } else {
      run.csv().row(at, value, normalized);
    }
  });

  auto* approx = cmd->add_subcommand("approx", "V(alpha, q, a) or W(alpha, q, a)");
  static std::string mode = "V";
  static double alpha = 0;
  static u64 a = 0;
  static u64 q = 1;
  approx->add_option("--mode", mode)->check(CLI::IsMember({"V", "W"}));
  approx->add_option("--alpha", alpha)->required();
  approx->add_option("--a", a)->required();
  approx->add_option("--q", q)->required();
  params.add(approx);
  approx->callback([&run] {
    const auto r = analytic::eval_major_approx(mode == "V" ? analytic::ApproxMode::V : analytic::ApproxMode::W, alpha,
                                               a, q, params.build());
    if (run.json()) {
      Json body = complex_json(r.value);
      body["prime_divides_q"] = r.prime_divides_q;
      body["accurate"] = r.accurate;
      run.emit("analytic.approx", body);
    } else {
      run.csv().row(r.value.real(), r.value.imag(), r.prime_divides_q);
    }
  });

  auto* wbeta = cmd->add_subcommand("wbeta", "the weighted sum w(beta)");
  static u64 n = 0;
  static double P = 0;
  static double eta = 0.1;
  wbeta->add_option("--beta", beta)->required();
  wbeta->add_option("--n", n)->required();
  wbeta->add_option("--P", P)->required();
  wbeta->add_option("--eta", eta);
  wbeta->callback([&run] { run.complex("analytic.wbeta", analytic::w_beta(beta, n, P, eta)); });
}

void add_search(CLI::App& app, Runner& run) {
  auto* cmd = app.add_subcommand("search", "representability over C");
  cmd->require_subcommand(1);

  auto* table = cmd->add_subcommand("table", "minimal s with n a sum of s k-th powers from C");
  static unsigned k = 2;
  static u64 N = 0;
  static unsigned cap = 12;
  static u64 X = 0;
  static u64 lo = 0;
  static u64 hi = 0;
  static unsigned bound = 0;
  table->add_option("--k", k);
  table->add_option("--N", N)->required();
  table->add_option("--cap", cap, "largest s tried");
  table->add_option("--X", X, "cache limit (default floor(N^(1/k)))");
  table->add_option("--lo", lo, "first n listed (default: tail window start)");
  table->add_option("--hi", hi, "last n listed (default N)");
  table->add_option("--bound", bound, "tail bound (default 8 for k=2, 17 for k=3)");
  table->callback([&run] {
    const u64 root = core::iroot(N, k);
    const u64 limit = std::max(X, root);
    cubes::CubeCache cache;
    if (const auto flag = run.cache_flag(); flag) {
      cache = io::load_or_build(limit, false, *flag, run.threads()).cache;
    } else {
      cache = cubes::build_cube_cache(limit, false, run.threads());
    }
    const auto t = search::minimal_s_table(k, N, cap, cache, run.threads());
    const u64 window = N > search::kDefaultTailWindow ? N - search::kDefaultTailWindow : 1;
    const u64 first = lo > 0 ? lo : window;
    const u64 last = hi > 0 ? hi : N;
    const unsigned b = bound > 0 ? bound : (k == 2 ? 8 : k == 3 ? 17 : cap);
    const auto tail = t.tail(window, b);
    if (run.json()) {
      Json rows = Json::array();
      for (const auto& r : t.records(first, last)) rows.push_back(io::to_json(r));
      run.emit("search.table", {{"k", k}, {"N", N}, {"cap", cap}, {"records", rows}, {"tail", io::to_json(tail)}});
    } else {
      for (u64 n = first; n <= last; ++n) {
        const auto s = t.s_min(n);
        if (s) {
          run.csv().row(n, *s);
        } else {
          run.csv().row(n, std::int64_t{-1});
        }
      }
      std::cerr << "tail [" << tail.lo << ", " << tail.hi << "]: max s_min " << tail.max_s << ", " << tail.exceeding
                << " above " << b << ", onset " << tail.onset << '\n';
    }
  });

  auto* lower = cmd->add_subcommand("lower", "the squares lower bound construction");
  static unsigned j = 0;
  lower->add_option("--j", j)->required();
  lower->callback([&run] {
    const auto r = search::verify_squares_lower_bound(j);
    if (run.json()) {
      run.emit("search.lower", io::to_json(r));
    } else {
      run.csv().row(r.j, r.target, static_cast<u64>(r.solutions.size()), r.ordered_solutions, r.base_mod9,
                    r.certified());
    }
  });

  auto* coverage = cmd->add_subcommand("coverage", "residues mod 81 of sums of eleven T(p x)^4");
  static bool primes = false;
  coverage->add_flag("--primes", primes, "restrict p to primes");
  coverage->callback([&run] {
    const auto r = search::quartic_residue_coverage(primes);
    if (run.json()) {
      run.emit("search.coverage", io::to_json(r));
    } else {
      run.csv().row(r.covered(), static_cast<u64>(r.base.size()), r.layer_sizes.back());
    }
  });

  auto* rep = cmd->add_subcommand("repcount", "exact toy-scale R(n), R_4(n) or K(m)");
  static ParamOpts params;
  static std::string mode = "R";
  static std::string target;
  static std::optional<unsigned> plain;
  static std::optional<unsigned> scaled;
  static std::optional<unsigned> twelfth;
  static bool fourier = false;
  rep->add_option("--mode", mode)->check(CLI::IsMember({"R", "R4", "K"}));
  rep->add_option("--at", target, "n (or m for K)")->required();
  rep->add_option("--plain", plain, "copies of h");
  rep->add_option("--scaled", scaled, "copies of W");
  rep->add_option("--twelfth", twelfth, "copies of f(81 alpha)");
  rep->add_flag("--fourier", fourier, "also evaluate the trapezoid Fourier route");
  params.add(rep);
  rep->callback([&run] {
    const auto ps = params.build();
    const auto m = mode == "R" ? search::RepMode::R : mode == "R4" ? search::RepMode::R4 : search::RepMode::K;
    auto shape = search::default_shape(m, ps);
    if (plain) shape.plain = *plain;
    if (scaled) shape.scaled = *scaled;
    if (twelfth) shape.twelfth = *twelfth;
    u128 at = 0;
    for (char c : target) {
      if (c < '0' || c > '9') throw ValidationError("--at must be a nonnegative integer");
      at = at * 10 + static_cast<unsigned>(c - '0');
    }
    const auto factors = search::rep_factors(shape, ps);
    const u64 count = search::rep_count(factors, at);
    std::optional<double> f;
    if (fourier) f = search::rep_count_fourier(factors, at);
    if (run.json()) {
      Json body{{"mode", mode}, {"at", target}, {"count", count}};
      if (f) body["fourier"] = *f;
      run.emit("search.repcount", body);
    } else if (f) {
      run.csv().row(count, *f);
    } else {
      run.csv().row(count);
    }
  });
}

void add_verify(CLI::App& app, Runner& run, int& exit_code) {
  auto* cmd = app.add_subcommand("verify", "run the acceptance suite");
  static std::vector<int> only;
  cmd->add_option("--only", only, "criterion ids");
  cmd->callback([&run, &exit_code] {
    std::vector<verify::CriterionResult> results;
    bool all = true;
    for (const auto& c : verify::criteria()) {
      if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
      results.push_back(verify::run(c));
      all = all && results.back().ok();
      if (!run.json()) {
        verify::print_line(std::cout, results.back());
        std::cout.flush();
      }
    }
    if (run.json()) std::cout << verify::to_json(results).dump(2) << '\n';
    exit_code = all ? kExitOk : kExitAssertion;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sums of three cubes: circle method objects at desk scale", "cubewaring"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", g.threads, "worker threads (0 = all cores)");
  app.add_option("--cache-dir", g.cache_dir, "cache directory (overrides $CUBEWARING_CACHE_DIR)");

  Runner run(g);
  int exit_code = kExitOk;
  add_cubes(app, run);
  add_smooth(app, run);
  add_expsum(app, run);
  add_local(app, run);
  add_analytic(app, run);
  add_search(app, run);
  add_verify(app, run, exit_code);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitValidation;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const OverflowError& e) {
    std::cerr << "overflow: " << e.what() << '\n';
    return kExitResource;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DomainError& e) {
    std::cerr << "outside the domain: " << e.what() << '\n';
    return kExitValidation;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kExitValidation;
  }
  return exit_code;
}
