#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

#include <unistd.h>

#include "cubewaring/error.hpp"
#include "cubewaring/io.hpp"

using namespace cubewaring;
using core::u64;
namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("cubewaring-io-" + std::to_string(::getpid()) + "-" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

}  // namespace

TEST_CASE("cache header layout") {
  const auto h = io::encode_header({0x0102030405060708ULL, true});
  const std::array<std::uint8_t, 20> expect{'C', '3', 'C', 'B', 1, 0, 0, 0, 8, 7, 6, 5, 4, 3, 2, 1, 1, 0, 0, 0};
  CHECK(h == expect);
  const auto back = io::decode_header(h);
  CHECK(back.limit == 0x0102030405060708ULL);
  CHECK(back.counts);

  auto bad = h;
  bad[0] = 'X';
  CHECK_THROWS_AS(io::decode_header(bad), ValidationError);
  bad = h;
  bad[4] = 2;
  CHECK_THROWS_AS(io::decode_header(bad), ValidationError);
  bad = h;
  bad[16] = 3;
  CHECK_THROWS_AS(io::decode_header(bad), ValidationError);
  CHECK_THROWS_AS(io::decode_header(std::span<const std::uint8_t>(h.data(), 19)), ValidationError);
}

TEST_CASE("cache file round trip through a memory map") {
  TempDir dir;
  const u64 X = 5000;
  const auto built = cubes::build_cube_cache(X, true, 1);
  const auto path = dir.path / "a.bin";
  io::save_cache(built, path);
  const auto bytes = slurp(path);
  REQUIRE(bytes.size() == 20 + cubes::CubeCache::payload_size(X, true));

  // Bit j of byte i is the integer 8i + j + 1: 3 = 1 + 1 + 1 is bit 2 of byte 0.
  CHECK(((bytes[20] >> 2U) & 1U) == 1);
  CHECK((bytes[20] & 0x3U) == 0);
  // Counts are little-endian 32-bit words after the membership bits: r3(3) = 1, r3(10) = 3.
  const std::size_t counts_at = 20 + cubes::CubeCache::membership_size(X);
  CHECK(bytes[counts_at + 4 * 2] == 1);
  CHECK(bytes[counts_at + 4 * 9] == 3);

  const auto loaded = io::load_cache(path);
  CHECK(loaded.limit() == X);
  CHECK(loaded.has_counts());
  u64 mismatches = 0;
  for (u64 n = 1; n <= X; ++n) {
    mismatches += loaded.contains(n) != built.contains(n);
    mismatches += loaded.r3(n) != built.r3(n);
  }
  CHECK(mismatches == 0);

  // Saving the mapped cache reproduces the file byte for byte.
  const auto again = dir.path / "b.bin";
  io::save_cache(loaded, again);
  CHECK(slurp(again) == bytes);
}

TEST_CASE("cache files are byte-identical across runs and thread counts") {
  TempDir dir;
  const auto a = dir.path / "one.bin";
  const auto b = dir.path / "many.bin";
  io::save_cache(cubes::build_cube_cache(100000, true, 1), a);
  io::save_cache(cubes::build_cube_cache(100000, true, 8), b);
  CHECK(slurp(a) == slurp(b));
  const auto c = dir.path / "bits.bin";
  io::save_cache(cubes::build_cube_cache(100000, false, 3), c);
  const auto bits = slurp(c);
  CHECK(bits.size() == 20 + 12500);
  CHECK(bits[16] == 0);
  CHECK(std::equal(bits.begin() + 20, bits.end(), slurp(a).begin() + 20));
}

TEST_CASE("corrupt cache files are rejected") {
  TempDir dir;
  const auto path = dir.path / "c.bin";
  io::save_cache(cubes::build_cube_cache(1000, false, 1), path);
  fs::resize_file(path, fs::file_size(path) - 1);
  CHECK_THROWS_AS(io::load_cache(path), ValidationError);
  CHECK_THROWS_AS(io::load_cache(dir.path / "missing.bin"), ValidationError);
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "C3C";
  }
  CHECK_THROWS_AS(io::load_cache(path), ValidationError);
}

TEST_CASE("cache directory precedence and load_or_build") {
  TempDir dir;
  ::unsetenv("CUBEWARING_CACHE_DIR");
  CHECK(io::cache_dir(std::nullopt) == fs::path(".cubewaring"));
  ::setenv("CUBEWARING_CACHE_DIR", dir.path.c_str(), 1);
  CHECK(io::cache_dir(std::nullopt) == dir.path);
  CHECK(io::cache_dir(fs::path("/elsewhere")) == fs::path("/elsewhere"));
  ::unsetenv("CUBEWARING_CACHE_DIR");

  const auto first = io::load_or_build(3000, true, dir.path, 2);
  CHECK_FALSE(first.loaded);
  CHECK(fs::exists(first.path));
  CHECK(first.path.filename() == io::cache_file_name(3000, true));
  const auto second = io::load_or_build(3000, true, dir.path, 2);
  CHECK(second.loaded);
  CHECK(second.cache.r3(3) == 1);
  // The file with counts also answers a membership-only request.
  const auto bits = io::load_or_build(3000, false, dir.path, 2);
  CHECK(bits.loaded);
  CHECK(bits.path == first.path);
}

TEST_CASE("csv rows are numeric and unquoted") {
  std::ostringstream out;
  io::CsvWriter csv(out);
  csv.row(u64{0}, u64{1}, u64{2});
  csv.row(u64{7}, true, 0.5, -3);
  const std::vector<u64> v{0, 1, 2, 3, 6, 7, 8};
  csv.row(std::span<const u64>(v));
  CHECK(out.str() == "0,1,2\n7,1,0.5,-3\n0,1,2,3,6,7,8\n");
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("json documents are versioned") {
  auto doc = io::document("search.table");
  CHECK(doc["schema"] == 1);
  CHECK(doc["kind"] == "search.table");

  search::SearchRecord r{8, 2, std::nullopt, {}};
  auto j = io::to_json(r);
  CHECK(j["s_min"].is_null());
  r = {18, 2, 2U, {3, 3}};
  j = io::to_json(r);
  CHECK(j["s_min"] == 2);
  CHECK(j["witness"] == io::Json::array({3, 3}));

  local::SeriesResult s;
  s.value = 0.5;
  s.factors.push_back({2, 3, 0.9, true});
  j = io::to_json(s);
  REQUIRE(j["factors"].size() == 1);
  CHECK(j["factors"][0]["p"] == 2);
  CHECK(j["factors"][0]["stabilized"] == true);

  const auto sq = io::to_json(search::verify_squares_lower_bound(0));
  CHECK(sq["certified"] == true);
  CHECK(sq["solutions"][0] == io::Json::array({4, 4, 4, 4}));
  // Round trip through text.
  doc["report"] = sq;
  CHECK(io::Json::parse(doc.dump()) == doc);
}
