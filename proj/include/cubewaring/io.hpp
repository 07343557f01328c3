#pragma once

// Persistence and output formats: the binary cube cache file, numeric CSV,
// and versioned JSON documents for the reports.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cubewaring/cubes.hpp"
#include "cubewaring/local.hpp"
#include "cubewaring/search.hpp"
#include "cubewaring/smooth.hpp"

namespace cubewaring::io {

using core::u64;
using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Cache file: "C3CB", u32 version, u64 X, u32 flags (bit 0: counts), all
// little-endian, then the CubeCache payload.

inline constexpr std::array<char, 4> kCacheMagic{'C', '3', 'C', 'B'};
inline constexpr std::uint32_t kCacheVersion = 1;
inline constexpr std::size_t kCacheHeaderSize = 20;
inline constexpr std::uint32_t kFlagCounts = 1;

struct CacheHeader {
  u64 limit = 0;
  bool counts = false;
};

std::array<std::uint8_t, kCacheHeaderSize> encode_header(const CacheHeader& h);
// Throws ValidationError on a bad magic, version or flag word.
CacheHeader decode_header(std::span<const std::uint8_t> bytes);

// Written to a sibling temporary and renamed into place.
void save_cache(const cubes::CubeCache& cache, const std::filesystem::path& path);

// Memory-maps the file; the returned cache keeps the mapping alive.
cubes::CubeCache load_cache(const std::filesystem::path& path);

inline constexpr std::string_view kCacheDirEnv = "CUBEWARING_CACHE_DIR";

// The explicit directory, else $CUBEWARING_CACHE_DIR, else ./.cubewaring.
std::filesystem::path cache_dir(const std::optional<std::filesystem::path>& flag);
std::filesystem::path cache_file_name(u64 X, bool counts);

struct CacheLookup {
  cubes::CubeCache cache;
  std::filesystem::path path;
  bool loaded = false;  // false: built and saved
};

// Loads <dir>/<name> when present (a file with counts also serves a request
// without), otherwise builds and saves it.
CacheLookup load_or_build(u64 X, bool counts, const std::filesystem::path& dir, unsigned threads = 0);

// ---------------------------------------------------------------------------
// CSV: numeric fields, no quoting, one newline-terminated row per record.

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  template <class... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((emit(fields, first)), ...);
    out_ << '\n';
  }
  void row(std::span<const u64> fields);

 private:
  template <class T>
  void emit(const T& v, bool& first) {
    if (!first) out_ << ',';
    first = false;
    write(v);
  }
  void write(u64 v) { out_ << v; }
  void write(std::int64_t v) { out_ << v; }
  void write(unsigned v) { out_ << v; }
  void write(int v) { out_ << v; }
  void write(bool v) { out_ << (v ? 1 : 0); }
  void write(double v);
  void write(core::u128 v) { out_ << core::to_string(v); }

  std::ostream& out_;
};

// Shortest round-trip form of a double.
std::string format_double(double v);

// ---------------------------------------------------------------------------
// JSON documents carry "schema": 1 and a "kind".

inline constexpr int kJsonSchema = 1;

Json document(std::string_view kind);

Json to_json(const search::SearchRecord& r);
Json to_json(const search::TailReport& r);
Json to_json(const search::SquaresReport& r);
Json to_json(const search::CoverageReport& r);
Json to_json(const local::SeriesResult& r);
Json to_json(const local::LocalFactor& f);
Json to_json(const local::QuarticSeries& s);
Json to_json(const smooth::PsiReport& r);

}  // namespace cubewaring::io
