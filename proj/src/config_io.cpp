#include "rmt/config_io.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "rmt/error.hpp"

namespace rmt {

namespace {

namespace fs = std::filesystem;

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
  throw InputError("field '" + field + "': " + what);
}

void require_object(const Json& j, const std::string& field) {
  if (!j.is_object()) schema_error(field, "expected an object");
}

void reject_unknown(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) schema_error(where.empty() ? it.key() : where + "." + it.key(), "unknown field");
}

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

double number_at(const Json& j, const std::string& field) {
  if (!j.is_number()) schema_error(field, "expected a number");
  return j.get<double>();
}

long integer_at(const Json& j, const std::string& field) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    if (j.is_number_float() && std::floor(j.get<double>()) == j.get<double>()) return static_cast<long>(j.get<double>());
    schema_error(field, "expected an integer");
  }
  return j.get<long>();
}

std::string string_at(const Json& j, const std::string& field) {
  if (!j.is_string()) schema_error(field, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers_at(const Json& j, const std::string& field) {
  if (!j.is_array()) schema_error(field, "expected an array of numbers");
  std::vector<double> v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number_at(j[i], field + "[" + std::to_string(i) + "]"));
  return v;
}

Domain domain_at(const Json& j, const std::string& field) {
  std::string d = string_at(j, field);
  if (d == "real") return Domain::Real;
  if (d == "circle") return Domain::Circle;
  schema_error(field, "expected \"real\" or \"circle\"");
}

const char* domain_name(Domain d) { return d == Domain::Real ? "real" : "circle"; }

// Rethrow factory errors with the field they came from.
template <typename F>
auto with_field(const std::string& field, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError& e) {
    schema_error(field, e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------

Json to_json(const SpectralMeasure& m) {
  if (auto a = m.as_atoms()) {
    Json atoms = Json::array();
    for (std::size_t k = 0; k < a->locations.size(); ++k) atoms.push_back({a->locations[k], a->weights[k]});
    Json j = {{"type", "atoms"}, {"atoms", atoms}};
    if (a->domain == Domain::Circle) j["domain"] = "circle";
    return j;
  }
  if (auto g = m.as_grid()) {
    return {{"type", "density"}, {"grid", g->grid}, {"values", g->values}, {"domain", domain_name(g->domain)}};
  }
  const Named& n = *m.as_named();
  const char* name = n.law == NamedLaw::Semicircle ? "semicircle" : n.law == NamedLaw::Laguerre ? "laguerre" : "uniform_circle";
  Json params = Json::object();
  for (const auto& [k, v] : n.params) params[k] = v;
  return {{"type", "named"}, {"name", name}, {"params", params}};
}

SpectralMeasure measure_from_json(const Json& j) {
  require_object(j, "measure");
  if (!j.contains("type")) schema_error("type", "missing");
  std::string type = string_at(j["type"], "type");
  if (type == "atoms") {
    reject_unknown(j, "", {"type", "atoms", "domain"});
    if (!j.contains("atoms") || !j["atoms"].is_array()) schema_error("atoms", "expected an array of [x, w] pairs");
    std::vector<double> x, w;
    double total = 0.0;
    for (std::size_t i = 0; i < j["atoms"].size(); ++i) {
      std::string f = "atoms[" + std::to_string(i) + "]";
      const Json& p = j["atoms"][i];
      if (!p.is_array() || p.size() != 2) schema_error(f, "expected [x, w]");
      x.push_back(number_at(p[0], f + "[0]"));
      w.push_back(number_at(p[1], f + "[1]"));
      if (w.back() < 0.0) schema_error(f + "[1]", "negative weight at index " + std::to_string(i));
      total += w.back();
    }
    if (std::abs(total - 1.0) > 1e-6) schema_error("atoms", "weights sum to " + std::to_string(total) + ", not 1");
    if (std::abs(total - 1.0) > 1e-9)
      for (double& v : w) v /= total;
    Domain d = j.contains("domain") ? domain_at(j["domain"], "domain") : Domain::Real;
    return with_field("atoms", [&] { return SpectralMeasure::atoms(x, w, d); });
  }
  if (type == "density") {
    reject_unknown(j, "", {"type", "grid", "values", "domain"});
    if (!j.contains("grid")) schema_error("grid", "missing");
    if (!j.contains("values")) schema_error("values", "missing");
    std::vector<double> grid = numbers_at(j["grid"], "grid");
    std::vector<double> values = numbers_at(j["values"], "values");
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] < 0.0) schema_error("values[" + std::to_string(i) + "]", "negative density value at index " + std::to_string(i));
    Domain d = j.contains("domain") ? domain_at(j["domain"], "domain") : Domain::Real;
    return with_field("grid", [&] { return SpectralMeasure::density(grid, values, d); });
  }
  if (type == "named") {
    reject_unknown(j, "", {"type", "name", "params"});
    if (!j.contains("name")) schema_error("name", "missing");
    std::string name = string_at(j["name"], "name");
    std::map<std::string, double> params;
    if (j.contains("params")) {
      require_object(j["params"], "params");
      for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
        params[it.key()] = number_at(it.value(), "params." + it.key());
    }
    NamedLaw law;
    if (name == "semicircle") {
      law = NamedLaw::Semicircle;
      for (const auto& [k, v] : params)
        if (k != "w" && k != "beta") schema_error("params." + k, "unknown parameter");
    } else if (name == "laguerre") {
      law = NamedLaw::Laguerre;
      for (const auto& [k, v] : params)
        if (k != "a" && k != "beta") schema_error("params." + k, "unknown parameter");
    } else if (name == "uniform_circle") {
      law = NamedLaw::UniformCircle;
      if (!params.empty()) schema_error("params", "uniform_circle takes no parameters");
    } else {
      schema_error("name", "unknown law '" + name + "'");
    }
    return with_field("params", [&] { return SpectralMeasure::named(law, params); });
  }
  schema_error("type", "expected \"atoms\", \"density\" or \"named\"");
}

SpectralMeasure load_measure(const fs::path& path) { return measure_from_json(read_json(path)); }

void save_measure(const SpectralMeasure& m, const fs::path& path) { write_json(path, to_json(m)); }

Json to_json(const PotentialPolynomial& V) { return {{"coeffs", V.coeffs()}}; }

PotentialPolynomial potential_from_json(const Json& j) {
  require_object(j, "potential");
  reject_unknown(j, "", {"coeffs"});
  if (!j.contains("coeffs")) schema_error("coeffs", "missing");
  std::vector<double> c = numbers_at(j["coeffs"], "coeffs");
  return with_field("coeffs", [&] { return PotentialPolynomial(c); });
}

PotentialPolynomial load_potential(const fs::path& path) { return potential_from_json(read_json(path)); }

Json to_json(const McmcParams& p) {
  return {{"sweeps", p.sweeps}, {"burn_in", p.burn_in}, {"proposal_scale", p.proposal_scale}, {"thin", p.thin}};
}

McmcParams mcmc_from_json(const Json& j) {
  require_object(j, "mcmc");
  reject_unknown(j, "mcmc", {"sweeps", "burn_in", "proposal_scale", "thin"});
  McmcParams p;
  if (j.contains("sweeps")) p.sweeps = integer_at(j["sweeps"], "mcmc.sweeps");
  if (j.contains("burn_in")) p.burn_in = integer_at(j["burn_in"], "mcmc.burn_in");
  if (j.contains("proposal_scale")) p.proposal_scale = number_at(j["proposal_scale"], "mcmc.proposal_scale");
  if (j.contains("thin")) p.thin = static_cast<int>(integer_at(j["thin"], "mcmc.thin"));
  with_field("mcmc", [&] { p.validate(); return 0; });
  return p;
}

Json to_json(const EnsembleSpec& s) {
  Json j = {{"family", std::string(to_string(s.family))}};
  if (s.n > 0) j["n"] = s.n;
  switch (s.family) {
    case Family::GUE:
    case Family::GOE:
      j["w"] = s.w;
      break;
    case Family::WignerGeneral:
      j["w"] = s.w;
      j["law"] = std::string(to_string(s.law));
      j["normalization"] = std::string(to_string(s.normalization));
      break;
    case Family::Laguerre:
      j["a"] = s.a;
      break;
    case Family::SampleCovariance:
      j["m"] = s.m;
      j["t_values"] = s.t_values;
      j["law"] = std::string(to_string(s.law));
      break;
    case Family::HaarUnitary:
      break;
    case Family::FreeSum:
      j["diag_a"] = s.diag_a;
      j["diag_b"] = s.diag_b;
      break;
    case Family::Deformed:
      if (!s.base_diagonal.empty()) j["base_diagonal"] = s.base_diagonal;
      if (s.base) j["base"] = to_json(*s.base);
      if (s.noise) j["noise"] = to_json(*s.noise);
      break;
    case Family::InvariantLogGas:
      if (s.potential) j["potential"] = to_json(*s.potential);
      j["mcmc"] = to_json(s.mcmc);
      break;
  }
  return j;
}

namespace {

EnsembleSpec spec_from_json_at(const Json& j, const std::string& where) {
  require_object(j, where.empty() ? "spec" : where);
  reject_unknown(j, where,
                 {"family", "n", "w", "a", "law", "normalization", "m", "t_values", "diag_a", "diag_b", "base_diagonal",
                  "base", "noise", "potential", "mcmc"});
  EnsembleSpec s;
  if (!j.contains("family")) schema_error(join(where, "family"), "missing");
  s.family = with_field(join(where, "family"), [&] { return parse_family(string_at(j["family"], join(where, "family"))); });
  if (j.contains("n")) s.n = static_cast<int>(integer_at(j["n"], join(where, "n")));
  if (j.contains("w")) s.w = number_at(j["w"], join(where, "w"));
  if (j.contains("a")) s.a = number_at(j["a"], join(where, "a"));
  if (j.contains("law"))
    s.law = with_field(join(where, "law"), [&] { return parse_entry_law(string_at(j["law"], join(where, "law"))); });
  if (j.contains("normalization"))
    s.normalization = with_field(join(where, "normalization"), [&] {
      return parse_normalization(string_at(j["normalization"], join(where, "normalization")));
    });
  if (j.contains("m")) s.m = static_cast<int>(integer_at(j["m"], join(where, "m")));
  if (j.contains("t_values")) s.t_values = numbers_at(j["t_values"], join(where, "t_values"));
  if (s.family == Family::SampleCovariance && s.m == 0) s.m = static_cast<int>(s.t_values.size());
  if (j.contains("diag_a")) s.diag_a = numbers_at(j["diag_a"], join(where, "diag_a"));
  if (j.contains("diag_b")) s.diag_b = numbers_at(j["diag_b"], join(where, "diag_b"));
  if (s.family == Family::FreeSum && s.n == 0) s.n = static_cast<int>(s.diag_a.size());
  if (j.contains("base_diagonal")) s.base_diagonal = numbers_at(j["base_diagonal"], join(where, "base_diagonal"));
  if (j.contains("base")) s.base = std::make_shared<EnsembleSpec>(spec_from_json_at(j["base"], join(where, "base")));
  if (j.contains("noise")) s.noise = std::make_shared<EnsembleSpec>(spec_from_json_at(j["noise"], join(where, "noise")));
  if (j.contains("potential"))
    s.potential = with_field(join(where, "potential"), [&] { return potential_from_json(j["potential"]); });
  if (j.contains("mcmc")) s.mcmc = mcmc_from_json(j["mcmc"]);
  if (s.n > 0) with_field(where.empty() ? "spec" : where, [&] { s.validate(); return 0; });
  return s;
}

}  // namespace

EnsembleSpec spec_from_json(const Json& j) { return spec_from_json_at(j, ""); }

EnsembleSpec load_spec(const fs::path& path) { return spec_from_json(read_json(path)); }

Json to_json(const SolverConfig& c) {
  return {{"tol", c.tol},
          {"max_iter", c.max_iter},
          {"damping", c.damping},
          {"epsilon_inversion", c.epsilon_inversion},
          {"y_start", c.y_start},
          {"y_min", c.y_min}};
}

SolverConfig solver_from_json(const Json& j) {
  require_object(j, "solver");
  reject_unknown(j, "", {"tol", "max_iter", "damping", "epsilon_inversion", "y_start", "y_min"});
  SolverConfig c;
  if (j.contains("tol")) c.tol = number_at(j["tol"], "tol");
  if (j.contains("max_iter")) c.max_iter = static_cast<int>(integer_at(j["max_iter"], "max_iter"));
  if (j.contains("damping")) c.damping = number_at(j["damping"], "damping");
  if (j.contains("epsilon_inversion")) c.epsilon_inversion = number_at(j["epsilon_inversion"], "epsilon_inversion");
  if (j.contains("y_start")) c.y_start = number_at(j["y_start"], "y_start");
  if (j.contains("y_min")) c.y_min = number_at(j["y_min"], "y_min");
  with_field("solver", [&] { c.validate(); return 0; });
  return c;
}

SolverConfig load_solver(const fs::path& path) { return solver_from_json(read_json(path)); }

Json to_json(const ExperimentReport& r) {
  auto cplx = [](Complex z) { return Json::array({z.real(), z.imag()}); };
  Json per_n = Json::array();
  for (const auto& s : r.per_n) {
    Json row = {{"n", s.n},
                {"trials", s.trials},
                {"mean", cplx(s.mean)},
                {"variance", s.variance},
                {"stderr", s.stderr_mean},
                {"stderr_variance", s.stderr_variance}};
    if (s.target) row["target"] = cplx(*s.target);
    per_n.push_back(row);
  }
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json row = {{"name", c.name}, {"value", c.value}, {"pass", c.pass}};
    row["lo"] = std::isfinite(c.lo) ? Json(c.lo) : Json(nullptr);
    row["hi"] = std::isfinite(c.hi) ? Json(c.hi) : Json(nullptr);
    checks.push_back(row);
  }
  Json j = {{"id", r.id},       {"config", r.config},     {"per_n", per_n},
            {"values", r.values}, {"checks", checks},     {"warnings", r.warnings},
            {"pass", r.pass()}};
  if (r.slope)
    j["slope"] = {{"slope", r.slope->slope},
                  {"intercept", r.slope->intercept},
                  {"half_width", r.slope->half_width},
                  {"points", r.slope->points}};
  return j;
}

std::string canonical_dump(const Json& j) { return j.dump(); }

std::string config_hash(const Json& j) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical_dump(j)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

Json to_json(const RunManifest& m) {
  return {{"command", m.command}, {"argv", m.argv},       {"config", m.config},     {"config_hash", config_hash(m.config)},
          {"seed", m.seed},       {"threads", m.threads}, {"version", kVersion},    {"started", m.started},
          {"finished", m.finished}, {"outputs", m.outputs}};
}

std::string utc_timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("'" + path.string() + "': " + e.what());
  }
}

void write_text_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw InputError("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

void write_json(const fs::path& path, const Json& j) { write_text_atomic(path, j.dump(2) + "\n"); }

std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << row[k];
    os << "\n";
  }
  return os.str();
}

void write_csv(const fs::path& path, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  write_text_atomic(path, csv_text(header, rows));
}

std::string report_csv(const ExperimentReport& r) {
  std::vector<std::vector<double>> rows;
  for (const auto& s : r.per_n)
    rows.push_back({static_cast<double>(s.n), s.mean.real(), s.mean.imag(), s.variance, s.stderr_mean});
  return csv_text({"n", "mean_re", "mean_im", "var", "stderr"}, rows);
}

}  // namespace rmt
