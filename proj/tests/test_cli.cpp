#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unistd.h>

#include "rmt/cli.hpp"
#include "rmt/config_io.hpp"
#include "rmt/error.hpp"

using namespace rmt;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

fs::path dir() {
  static fs::path d = [] {
    fs::path p = fs::temp_directory_path() / ("rmt_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return d;
}

std::string path(const std::string& name) { return (dir() / name).string(); }

void put(const std::string& name, const std::string& text) {
  std::ofstream(path(name)) << text;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int call(std::vector<std::string> args) {
  args.insert(args.begin(), "rmt");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

// Rows of a two-column CSV with a header.
std::vector<std::pair<double, double>> read_pairs(const std::string& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::pair<double, double>> rows;
  while (std::getline(in, line)) {
    auto c = line.find(',');
    rows.emplace_back(std::stod(line.substr(0, c)), std::stod(line.substr(c + 1)));
  }
  return rows;
}

double value_at(const std::vector<std::pair<double, double>>& rows, double x) {
  for (const auto& [l, r] : rows)
    if (std::abs(l - x) < 1e-9) return r;
  return NAN;
}

}  // namespace

TEST_CASE("argument parsers") {
  CHECK(cli::parse_complex("5i") == Complex(0, 5));
  CHECK(cli::parse_complex("i") == Complex(0, 1));
  CHECK(cli::parse_complex("1+2i") == Complex(1, 2));
  CHECK(cli::parse_complex("-0.5-1e-3i") == Complex(-0.5, -1e-3));
  CHECK(cli::parse_complex("0.2") == Complex(0.2, 0));
  CHECK_THROWS_AS(cli::parse_complex("five"), InputError);
  CHECK_THROWS_AS(cli::parse_complex(""), InputError);

  auto g = cli::parse_grid("-1:1:0.5");
  REQUIRE(g.size() == 5);
  CHECK(g.front() == -1.0);
  CHECK(g.back() == 1.0);
  CHECK(cli::parse_grid("-3:3:0.005").size() == 1201);
  CHECK_THROWS_AS(cli::parse_grid("1:0:0.1"), InputError);
  CHECK_THROWS_AS(cli::parse_grid("0:1"), InputError);
  CHECK_THROWS_AS(cli::parse_grid("0:1:-0.1"), InputError);

  CHECK(cli::parse_int_list("64,128,256") == std::vector<int>{64, 128, 256});
  CHECK_THROWS_AS(cli::parse_int_list("64,,3"), InputError);
  CHECK_THROWS_AS(cli::parse_int_list("a"), InputError);
}

TEST_CASE("density") {
  auto out = path("d.csv");
  REQUIRE(call({"density", "--law", "semicircle", "--w", "1", "--grid", "-3:3:0.005", "--out", out}) == 0);
  auto rows = read_pairs(out);
  CHECK(rows.size() == 1201);
  CHECK(value_at(rows, 0.0) == Approx(0.225079079039276517).epsilon(1e-12));
  CHECK(value_at(rows, 3.0) == 0.0);
  CHECK(fs::exists(out + ".manifest.json"));
  auto manifest = read_json(out + ".manifest.json");
  CHECK(manifest["command"] == "density");
  CHECK(manifest["seed"] == 1);

  // Global flags may come first as well.
  auto out2 = path("d2.csv");
  REQUIRE(call({"--out", out2, "density", "--law", "semicircle", "--w", "1", "--grid", "-3:3:0.005"}) == 0);
  CHECK(slurp(out) == slurp(out2));

  auto lag = path("lag.csv");
  REQUIRE(call({"density", "--law", "laguerre", "--a", "0.7071067811865476", "--grid", "0.5:3.5:0.5", "--out", lag}) == 0);
  CHECK(value_at(read_pairs(lag), 2.0) == Approx(1 / (2 * std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("sample is deterministic") {
  put("gue.json", R"({"family":"gue","w":1})");
  auto a = path("eigs_a"), b = path("eigs_b");
  REQUIRE(call({"sample", "--spec", path("gue.json"), "--n", "64", "--trials", "4", "--seed", "7", "--out", a}) == 0);
  REQUIRE(call({"sample", "--spec", path("gue.json"), "--n", "64", "--trials", "4", "--seed", "7", "--threads", "3",
                "--out", b}) == 0);
  for (int t = 0; t < 4; ++t) {
    char name[32];
    std::snprintf(name, sizeof name, "trial_%04d.csv", t);
    REQUIRE(fs::exists(fs::path(a) / name));
    CHECK(slurp((fs::path(a) / name).string()) == slurp((fs::path(b) / name).string()));
  }
  CHECK(fs::exists(fs::path(a) / "manifest.json"));
  auto c = path("eigs_c");
  REQUIRE(call({"sample", "--spec", path("gue.json"), "--n", "64", "--trials", "1", "--seed", "8", "--out", c}) == 0);
  CHECK(slurp((fs::path(a) / "trial_0000.csv").string()) != slurp((fs::path(c) / "trial_0000.csv").string()));
}

TEST_CASE("convolve bernoulli") {
  put("bern.json", R"({"type":"atoms","atoms":[[-1,0.5],[1,0.5]]})");
  auto out = path("conv.csv");
  REQUIRE(call({"convolve", "--a", path("bern.json"), "--b", path("bern.json"), "--grid", "-3:3:0.01", "--out", out}) ==
          0);
  CHECK(value_at(read_pairs(out), 0.0) == Approx(1 / (2 * std::numbers::pi)).epsilon(1e-4));
}

TEST_CASE("compare identical inputs") {
  put("atoms.json", R"({"type":"atoms","atoms":[[-1,0.25],[0.5,0.25],[2,0.5]]})");
  auto out = path("cmp.json");
  REQUIRE(call({"compare", "--source", path("atoms.json"), "--law", "measure", "--measure", path("atoms.json"), "--out",
                out}) == 0);
  CHECK(read_json(out)["ks"] == 0.0);
}

TEST_CASE("equilibrium") {
  put("quartic.json", R"({"coeffs":[0,0,0,0,0.25]})");
  auto out = path("eq.json");
  REQUIRE(call({"equilibrium", "--potential", path("quartic.json"), "--out", out}) == 0);
  auto j = read_json(out);
  double a4 = std::pow(j["b"].get<double>(), 4);
  CHECK(std::abs(a4 - 16.0 / 3.0) <= 1e-8);
  CHECK(std::abs(j["a"].get<double>() + j["b"].get<double>()) <= 1e-8);
  CHECK(std::abs(j["mass"].get<double>() - 1.0) <= 1e-8);
}

TEST_CASE("exit codes") {
  CHECK(call({"density", "--law", "semicircle", "--grid", "-1:1:0.1"}) == 1);                   // no --out
  CHECK(call({"density", "--law", "semicircle", "--grid", "-1:1:0.1", "--bogus", "--out", path("x.csv")}) == 1);
  CHECK(call({"--out", path("x.csv")}) == 1);                                                     // no command
  CHECK(call({"equilibrium", "--potential", path("missing.json"), "--out", path("y.json")}) == 1);
  put("odd.json", R"({"coeffs":[0,1]})");
  CHECK(call({"equilibrium", "--potential", path("odd.json"), "--out", path("y.json")}) == 1);
  CHECK(call({"density", "--law", "semicircle", "--grid", "1:0:0.1", "--out", path("x.csv")}) == 1);

  // A solver that cannot converge is a numerical failure.
  put("tight.json", R"({"max_iter":1,"tol":1e-15})");
  put("sigma.json", R"({"type":"atoms","atoms":[[1,0.5],[3,0.5]]})");
  CHECK(call({"--solver", path("tight.json"), "density", "--law", "mp", "--sigma", path("sigma.json"), "--c", "0.5",
              "--grid", "0.1:8:0.1", "--out", path("mp.csv")}) == 2);
}
