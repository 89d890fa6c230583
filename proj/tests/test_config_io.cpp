#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "oracles.hpp"
#include "rmt/config_io.hpp"
#include "rmt/error.hpp"
#include "rmt/limit_laws.hpp"

using namespace rmt;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("rmt_config_io_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("measure round trips") {
  auto a = SpectralMeasure::atoms({-1.0, 0.1, 2.5}, {0.2, 0.3, 0.5});
  auto p = scratch("atoms.json");
  save_measure(a, p);
  auto b = load_measure(p);
  REQUIRE(b.as_atoms());
  CHECK(b.as_atoms()->locations == a.as_atoms()->locations);
  CHECK(b.as_atoms()->weights == a.as_atoms()->weights);

  // Values that need all 17 digits survive.
  auto g = SpectralMeasure::density({0.0, 0.5, 1.5, 2.0}, {0.0, 2.0 / 3.0, 2.0 / 3.0, 0.0});
  auto pg = scratch("grid.json");
  save_measure(g, pg);
  auto h = load_measure(pg);
  REQUIRE(h.as_grid());
  CHECK(h.as_grid()->grid == g.as_grid()->grid);
  CHECK(h.as_grid()->values == g.as_grid()->values);
  std::string first = slurp(pg);
  save_measure(h, pg);
  CHECK(slurp(pg) == first);

  auto c = SpectralMeasure::atoms({0.5, 3.0}, {0.5, 0.5}, Domain::Circle);
  auto back = measure_from_json(to_json(c));
  CHECK(back.domain() == Domain::Circle);
}

TEST_CASE("measure schema errors") {
  Json neg = {{"type", "density"}, {"grid", {0.0, 1.0, 2.0}}, {"values", {0.5, -0.1, 0.5}}};
  std::string msg = error_of([&] { measure_from_json(neg); });
  CHECK(msg.find("values") != std::string::npos);
  CHECK(msg.find("1") != std::string::npos);

  Json mass = {{"type", "atoms"}, {"atoms", {{0.0, 0.5}, {1.0, 0.4}}}};
  CHECK(error_of([&] { measure_from_json(mass); }).find("atoms") != std::string::npos);
  Json close = {{"type", "atoms"}, {"atoms", {{0.0, 0.5}, {1.0, 0.5000001}}}};
  CHECK_NOTHROW(measure_from_json(close));
  Json negw = {{"type", "atoms"}, {"atoms", {{0.0, 1.5}, {1.0, -0.5}}}};
  CHECK_FALSE(error_of([&] { measure_from_json(negw); }).empty());
  Json extra = {{"type", "atoms"}, {"atoms", {{0.0, 1.0}}}, {"colour", "red"}};
  CHECK(error_of([&] { measure_from_json(extra); }).find("colour") != std::string::npos);
  CHECK_THROWS_AS(measure_from_json(Json{{"type", "spline"}}), InputError);
  CHECK_THROWS_AS(measure_from_json(Json::array()), InputError);
  Json unknown_law = {{"type", "named"}, {"name", "cauchy"}};
  CHECK_THROWS_AS(measure_from_json(unknown_law), InputError);
}

TEST_CASE("named measures resolve to limit laws") {
  Json j = {{"type", "named"}, {"name", "semicircle"}, {"params", {{"w", 1.0}}}};
  auto m = measure_from_json(j);
  REQUIRE(m.as_named());
  Complex z(0.3, 0.8);
  CHECK(std::abs(stieltjes_eval(m, z) - oracle::semicircle_f(z, 1.0, 2)) <= 1e-12);
  auto lag = measure_from_json({{"type", "named"}, {"name", "laguerre"}, {"params", {{"a", 0.5}}}});
  CHECK(std::abs(stieltjes_eval(lag, z) - laguerre_stieltjes(z, 0.5, 2)) <= 1e-12);
  CHECK_THROWS_AS(measure_from_json({{"type", "named"}, {"name", "semicircle"}, {"params", {{"v", 1.0}}}}), InputError);
  auto rt = measure_from_json(to_json(m));
  CHECK(rt.as_named()->params == m.as_named()->params);
}

TEST_CASE("potentials") {
  auto V = potential_from_json(Json::parse(R"({"coeffs":[0,0,0.25]})"));
  CHECK(V.degree() == 2);
  CHECK(V(2.0) == Approx(1.0));
  std::string msg = error_of([] { potential_from_json(Json::parse(R"({"coeffs":[0,1]})")); });
  CHECK(msg.find("convex polynomial of an even degree") != std::string::npos);
  CHECK(msg.find("odd degree") != std::string::npos);
  CHECK(error_of([] { potential_from_json(Json::parse(R"({"coeffs":[0,0,-1]})")); })
            .find("convex polynomial of an even degree") != std::string::npos);
  CHECK_THROWS_AS(potential_from_json(Json::parse(R"({"coeffs":[0,0,1],"x":1})")), InputError);
  CHECK_THROWS_AS(potential_from_json(Json::parse(R"({"coeffs":"quartic"})")), InputError);
  CHECK(to_json(V) == Json::parse(R"({"coeffs":[0.0,0.0,0.25]})"));
}

TEST_CASE("solver config") {
  SolverConfig d = solver_from_json(Json::object());
  CHECK(d.damping == 0.5);
  CHECK(d.tol == 1e-12);
  SolverConfig c = solver_from_json(Json::parse(R"({"tol":1e-10,"max_iter":50})"));
  CHECK(c.tol == 1e-10);
  CHECK(c.max_iter == 50);
  CHECK(c.damping == 0.5);
  CHECK(solver_from_json(to_json(c)).tol == c.tol);
  CHECK(error_of([] { solver_from_json(Json::parse(R"({"tolerance":1e-10})")); }).find("tolerance") !=
        std::string::npos);
  CHECK(error_of([] { solver_from_json(Json::parse(R"({"damping":1.5})")); }).find("damping") != std::string::npos);
  CHECK_THROWS_AS(solver_from_json(Json::parse(R"({"max_iter":"many"})")), InputError);
}

TEST_CASE("ensemble specs") {
  auto s = spec_from_json(Json::parse(R"({"family":"gue","n":64,"w":0.5})"));
  CHECK(s.family == Family::GUE);
  CHECK(s.n == 64);
  CHECK(s.w == 0.5);
  auto rt = spec_from_json(to_json(s));
  CHECK(to_json(rt) == to_json(s));

  auto cov = spec_from_json(Json::parse(R"({"family":"sample_covariance","n":4,"t_values":[1,3,1],"law":"real-gaussian"})"));
  CHECK(cov.m == 3);
  CHECK(cov.law == EntryLaw::RealGaussian);

  auto def = spec_from_json(Json::parse(
      R"({"family":"deformed","n":3,"base_diagonal":[1,-1,1],"noise":{"family":"gue","n":3,"w":1}})"));
  REQUIRE(def.noise);
  CHECK(def.noise->family == Family::GUE);
  CHECK(to_json(spec_from_json(to_json(def))) == to_json(def));

  auto lg = spec_from_json(Json::parse(
      R"({"family":"invariant","n":8,"potential":{"coeffs":[0,0,0,0,0.25]},"mcmc":{"sweeps":10,"burn_in":5}})"));
  CHECK(lg.mcmc.sweeps == 10);
  CHECK(lg.mcmc.thin == 10);

  CHECK(error_of([] { spec_from_json(Json::parse(R"({"family":"gue","n":4,"size":3})")); }).find("size") !=
        std::string::npos);
  CHECK(error_of([] { spec_from_json(Json::parse(R"({"family":"gue","n":4,"w":-1})")); }).find("w") !=
        std::string::npos);
  CHECK_THROWS_AS(spec_from_json(Json::parse(R"({"n":4})")), InputError);
  CHECK_THROWS_AS(spec_from_json(Json::parse(R"({"family":"wishart"})")), InputError);
  CHECK_THROWS_AS(spec_from_json(Json::parse(R"({"family":"invariant","n":4,"potential":{"coeffs":[0,0,1],"mcmc":{"thin":0}}})")),
                  InputError);
}

TEST_CASE("canonical dump and hash") {
  Json a = Json::parse(R"({"b":1,"a":[1.5,2],"c":{"y":true,"x":null}})");
  Json b = Json::parse(R"({"c":{"x":null,"y":true},"a":[1.5,2],"b":1})");
  CHECK(canonical_dump(a) == canonical_dump(b));
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  CHECK(config_hash(a) != config_hash(Json::parse(R"({"b":2})")));
  CHECK(canonical_dump(Json(0.1)) == "0.1");
  CHECK(Json::parse(canonical_dump(Json(1.0 / 3.0))).get<double>() == 1.0 / 3.0);
  CHECK(config_hash(Json("")) != config_hash(Json("a")));
}

TEST_CASE("files") {
  auto p = scratch("nested/dir/out.json");
  write_json(p, Json{{"k", 1}});
  CHECK(read_json(p)["k"] == 1);
  CHECK_FALSE(fs::exists(p.string() + ".tmp"));
  CHECK_THROWS_AS(read_json(scratch("missing.json")), InputError);
  auto bad = scratch("bad.json");
  write_text_atomic(bad, "{not json");
  CHECK_THROWS_AS(read_json(bad), InputError);

  std::string csv = csv_text({"x", "y"}, {{0.1, 1.0 / 3.0}, {2.0, -1e-300}});
  std::istringstream in(csv);
  std::string header, row1, row2;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  CHECK(header == "x,y");
  double v = std::stod(row1.substr(row1.find(',') + 1));
  CHECK(v == 1.0 / 3.0);
  CHECK(std::stod(row1.substr(0, row1.find(','))) == 0.1);
  CHECK(std::stod(row2.substr(row2.find(',') + 1)) == -1e-300);
}

TEST_CASE("reports and manifests") {
  ExperimentReport r;
  r.id = "variance";
  r.config = {{"seed", 3}};
  std::vector<Complex> v = {Complex(1, 2), Complex(3, 4)};
  r.per_n.push_back(summarize(16, v));
  r.add_check("slope", -2.0, -2.4, -1.6);
  r.add_check("bias", 0.0, -INFINITY, 0.0);
  Json j = to_json(r);
  CHECK(j["pass"] == true);
  CHECK(j["checks"][1]["lo"].is_null());
  CHECK(j["per_n"][0]["n"] == 16);
  std::string csv = report_csv(r);
  CHECK(csv.rfind("n,mean_re,mean_im,var,stderr\n", 0) == 0);
  CHECK(csv.find("16,2,3,") != std::string::npos);

  RunManifest m;
  m.command = "density";
  m.argv = {"rmt", "density"};
  m.config = {{"w", 1.0}};
  m.seed = 9;
  m.started = utc_timestamp();
  m.finished = m.started;
  Json mj = to_json(m);
  CHECK(mj["seed"] == 9);
  CHECK(mj["config_hash"] == config_hash(m.config));
  CHECK(mj["version"] == kVersion);
  CHECK(m.started.size() == 20);
  CHECK(m.started.back() == 'Z');
}
