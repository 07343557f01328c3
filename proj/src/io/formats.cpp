#include <charconv>
#include <cmath>

#include "cubewaring/io.hpp"

namespace cubewaring::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

void CsvWriter::write(double v) { out_ << format_double(v); }

void CsvWriter::row(std::span<const u64> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << fields[i];
  }
  out_ << '\n';
}

Json document(std::string_view kind) {
  Json j;
  j["schema"] = kJsonSchema;
  j["kind"] = kind;
  return j;
}

Json to_json(const search::SearchRecord& r) {
  Json j;
  j["n"] = r.n;
  j["k"] = r.k;
  if (r.s_min) {
    j["s_min"] = *r.s_min;
  } else {
    j["s_min"] = nullptr;
  }
  j["witness"] = r.witness;
  return j;
}

Json to_json(const search::TailReport& r) {
  Json j;
  j["lo"] = r.lo;
  j["hi"] = r.hi;
  j["bound"] = r.bound;
  j["exceeding"] = r.exceeding;
  j["first_exceeding"] = r.first_exceeding ? Json(*r.first_exceeding) : Json(nullptr);
  j["max_s"] = r.max_s;
  j["onset"] = r.onset;
  j["ok"] = r.ok();
  return j;
}

Json to_json(const search::SquaresReport& r) {
  Json j;
  j["j"] = r.j;
  j["target"] = r.target;
  j["base"] = r.base;
  j["solutions"] = r.solutions;
  j["ordered_solutions"] = r.ordered_solutions;
  j["base_mod9"] = r.base_mod9;
  j["residue_excluded"] = r.residue_excluded;
  j["unique"] = r.unique();
  j["certified"] = r.certified();
  return j;
}

Json to_json(const search::CoverageReport& r) {
  Json j;
  j["modulus"] = r.modulus;
  j["summands"] = r.summands;
  j["base"] = r.base;
  j["layer_sizes"] = r.layer_sizes;
  j["covered"] = r.covered();
  Json w = Json::array();
  for (u64 res = 0; res < r.witnesses.size(); ++res) {
    Json terms = Json::array();
    for (const auto& t : r.witnesses[res]) terms.push_back({{"p", t.p}, {"x", t.x}, {"residue", t.residue}});
    w.push_back({{"residue", res}, {"terms", terms}});
  }
  j["witnesses"] = w;
  return j;
}

Json to_json(const local::LocalFactor& f) {
  return {{"p", f.p}, {"h", f.h}, {"value", f.value}, {"stabilized", f.stabilized}};
}

Json to_json(const local::SeriesResult& r) {
  Json j;
  j["value"] = r.value;
  j["tail_exponent"] = r.tail_exponent;
  Json factors = Json::array();
  for (const auto& f : r.factors) factors.push_back(to_json(f));
  j["factors"] = factors;
  return j;
}

Json to_json(const local::QuarticSeries& s) {
  Json j;
  j["value"] = s.value;
  j["positive"] = s.positive;
  Json terms = Json::array();
  for (const auto& t : s.terms) terms.push_back({{"q", t.q}, {"value", t.value}, {"imag_residue", t.imag_residue}});
  j["terms"] = terms;
  Json sigma = Json::array();
  for (const auto& [p, v] : s.sigma_m) sigma.push_back({{"p", p}, {"value", v}});
  j["sigma_m"] = sigma;
  return j;
}

Json to_json(const smooth::PsiReport& r) {
  return {{"Y", r.Y}, {"u", r.u}, {"R", r.R}, {"psi", r.psi}, {"ratio", r.ratio}, {"rho", r.rho}};
}

}  // namespace cubewaring::io
