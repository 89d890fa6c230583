#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmt/ensembles.hpp"
#include "rmt/equilibrium.hpp"
#include "rmt/experiments.hpp"
#include "rmt/measures.hpp"
#include "rmt/solver_config.hpp"

namespace rmt {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::json;

Json to_json(const SpectralMeasure& m);
SpectralMeasure measure_from_json(const Json& j);
SpectralMeasure load_measure(const std::filesystem::path& path);
void save_measure(const SpectralMeasure& m, const std::filesystem::path& path);

Json to_json(const PotentialPolynomial& V);
PotentialPolynomial potential_from_json(const Json& j);
PotentialPolynomial load_potential(const std::filesystem::path& path);

Json to_json(const McmcParams& p);
McmcParams mcmc_from_json(const Json& j);

/// Fields not relevant to the family are omitted.
Json to_json(const EnsembleSpec& s);
/// n may be omitted (0) for callers that supply it separately.
EnsembleSpec spec_from_json(const Json& j);
EnsembleSpec load_spec(const std::filesystem::path& path);

Json to_json(const SolverConfig& c);
/// Omitted fields keep their defaults; unknown fields are rejected.
SolverConfig solver_from_json(const Json& j);
SolverConfig load_solver(const std::filesystem::path& path);

Json to_json(const ExperimentReport& r);

/// Sorted keys, no whitespace, shortest round-trip numbers.
std::string canonical_dump(const Json& j);
/// 16 hex digits of FNV-1a over the canonical dump.
std::string config_hash(const Json& j);

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  Json config;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string started;
  std::string finished;
  std::vector<std::string> outputs;
};

Json to_json(const RunManifest& m);
std::string utc_timestamp();

Json read_json(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);
void write_json(const std::filesystem::path& path, const Json& j);

/// Header row, then one row per entry; 17 significant digits.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

/// Columns n, mean_re, mean_im, var, stderr.
std::string report_csv(const ExperimentReport& r);

}  // namespace rmt
