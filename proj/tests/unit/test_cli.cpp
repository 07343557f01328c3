#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

std::string binary() {
  const char* p = std::getenv("CUBEWARING_CLI");
  REQUIRE_MESSAGE(p != nullptr, "CUBEWARING_CLI must point at the cubewaring binary");
  return p;
}

Result run(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + (env.empty() ? "" : " ") + binary() + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("residues of C modulo 9") {
  const auto r = run("cubes residues --mod 9");
  CHECK(r.code == 0);
  CHECK(r.out == "0,1,2,3,6,7,8\n");

  const auto j = run("--format json cubes residues --mod 9");
  CHECK(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["schema"] == 1);
  CHECK(doc["kind"] == "cubes.residues");
  CHECK(doc["residues"] == nlohmann::json::array({0, 1, 2, 3, 6, 7, 8}));
}

TEST_CASE("dickman rho at 2") {
  const auto r = run("smooth rho --x 2");
  CHECK(r.code == 0);
  CHECK(std::abs(std::stod(r.out) - (1.0 - std::log(2.0))) < 1e-8);
}

TEST_CASE("exit codes") {
  CHECK(run("--no-such-flag").code == 2);
  CHECK(run("cubes residues --mod 9 --no-such-flag").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("cubes residues --mod 0").code == 2);
  CHECK(run("search lower --j 2").code == 2);
  CHECK(run("local sigma --p 2 --slots x:1 --n 5").code == 2);
  // The P = 40 toy with six h factors overflows the histogram budget.
  CHECK(run("search repcount --P 40 --M 3 --H 54 --eta 0.5 --at 1152921504606846976 --plain 6 --scaled 0 --twelfth 0").code == 3);
  CHECK(run("verify --only 1").code == 0);
}

TEST_CASE("query and minimal s table") {
  const auto q = run("cubes query --n 3 --n 4 --n 10");
  CHECK(q.code == 0);
  CHECK(q.out == "3,1,1\n4,0,0\n10,1,3\n");

  const auto t = run("search table --k 2 --N 40 --lo 8 --hi 10 --cap 8");
  CHECK(t.code == 0);
  CHECK(t.out == "8,-1\n9,1\n10,-1\n");

  const auto j = run("--format json search table --k 2 --N 40 --lo 18 --hi 18 --cap 8");
  const auto doc = nlohmann::json::parse(j.out);
  REQUIRE(doc["records"].size() == 1);
  CHECK(doc["records"][0]["s_min"] == 2);
  CHECK(doc["records"][0]["witness"] == nlohmann::json::array({3, 3}));
}

TEST_CASE("search reports") {
  const auto lower = run("--format json search lower --j 1");
  CHECK(lower.code == 0);
  CHECK(nlohmann::json::parse(lower.out)["certified"] == true);

  const auto cov = run("search coverage");
  CHECK(cov.code == 0);
  CHECK(cov.out.rfind("1,", 0) == 0);
}

TEST_CASE("cache directory from flag and environment") {
  const fs::path dir = fs::temp_directory_path() / ("cubewaring-cli-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  const auto a = run("--cache-dir " + dir.string() + " cubes build --X 2000 --counts");
  CHECK(a.code == 0);
  CHECK(a.out.rfind("2000,", 0) == 0);
  CHECK(a.out.find(",0\n") != std::string::npos);
  CHECK(fs::exists(dir / "c3cb-2000-counts.bin"));

  const auto b = run("cubes build --X 2000 --counts", "CUBEWARING_CACHE_DIR=" + dir.string());
  CHECK(b.code == 0);
  CHECK(b.out.find(",1\n") != std::string::npos);

  const auto q = run("cubes query --n 10", "CUBEWARING_CACHE_DIR=" + dir.string());
  CHECK(q.out == "10,1,3\n");
  fs::remove_all(dir);
}
