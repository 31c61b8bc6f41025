#pragma once

// Entry catalog, run configuration and the suite runner behind the CLI.

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sobolev/reports.hpp"

namespace sobolev::suite {

enum class ParamKind { Number, Integer, String, NumberList, IntegerList };

struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::Number;
  nlohmann::json fallback;
};

struct CatalogEntry {
  std::string op;
  std::string module;
  reports::Anchor anchor;
  std::string summary;
  std::string default_sample;  // empty: the entry builds its own data
  std::vector<ParamSpec> params;
  std::vector<std::string> metrics;
};

const std::vector<CatalogEntry>& catalog();
/// Throws ContractError for unknown names.
const CatalogEntry& find_entry(const std::string& op);
std::string describe(const CatalogEntry& e);

/// A schema violation located by a JSON pointer.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string pointer, const std::string& message)
      : std::runtime_error(pointer + ": " + message), pointer(std::move(pointer)) {}
  std::string pointer;
};

struct EntrySpec {
  std::string name;
  std::string op;
  std::string sample;
  nlohmann::json params = nlohmann::json::object();  // defaults filled in
  std::map<std::string, double> thresholds;
};

enum class Format { Json, Csv, Both };

struct RunConfig {
  std::uint64_t seed = 42;
  Format format = Format::Both;
  std::filesystem::path output_dir = "sobolev-out";
  std::size_t workers = 0;  // 0: available parallelism
  std::vector<EntrySpec> suite;
};

inline constexpr int kSchemaVersion = 1;

Format format_from_string(const std::string& s);
RunConfig parse_config(const nlohmann::json& j);
/// Throws ConfigError with pointer "" when the file is unreadable or not JSON.
RunConfig load_config(const std::filesystem::path& path);

struct RunContext {
  std::uint64_t seed = 42;
  std::size_t refine = 4;  // ladder levels 32, 64, ... (refine of them)
};

std::vector<std::size_t> ladder(std::size_t refine);
/// Seed for one entry, mixed from the run seed and the entry name.
std::uint64_t entry_seed(std::uint64_t seed, const std::string& name);

/// Runs one entry; exceptions are caught into Report::error.
reports::Report run_entry(const EntrySpec& spec, const RunContext& ctx);
/// All entries on a worker pool, returned sorted by entry name.
std::vector<reports::Report> run_suite(const std::vector<EntrySpec>& entries, const RunContext& ctx,
                                       std::size_t workers);

/// summary.csv always; summary.json and per-entry JSON for json/both;
/// per-entry table CSV for csv/both. Timestamps go to run_metadata.json only.
void write_outputs(const std::vector<reports::Report>& reports, const std::filesystem::path& dir, Format format,
                   const nlohmann::json& metadata);

}  // namespace sobolev::suite
