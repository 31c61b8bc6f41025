#include "sobolev/suite.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "sobolev/errors.hpp"
#include "suite_entries.hpp"

namespace sobolev::suite {

using nlohmann::json;

namespace {

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + escape_token(key); }
std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

bool is_count(const json& j) { return j.is_number_unsigned() || (j.is_number_integer() && j.get<long long>() >= 0); }

bool is_number_like(const json& j) {
  if (j.is_number()) return true;
  return j.is_string() && (j.get<std::string>() == "inf" || j.get<std::string>() == "-inf");
}

const char* kind_name(ParamKind k) {
  switch (k) {
    case ParamKind::Number: return "a number (or \"inf\")";
    case ParamKind::Integer: return "a non-negative integer";
    case ParamKind::String: return "a string";
    case ParamKind::NumberList: return "an array of numbers";
    case ParamKind::IntegerList: return "an array of non-negative integers";
  }
  return "?";
}

bool matches(const json& j, ParamKind k) {
  switch (k) {
    case ParamKind::Number: return is_number_like(j);
    case ParamKind::Integer: return is_count(j);
    case ParamKind::String: return j.is_string();
    case ParamKind::NumberList: return j.is_array() && std::all_of(j.begin(), j.end(), is_number_like);
    case ParamKind::IntegerList: return j.is_array() && std::all_of(j.begin(), j.end(), is_count);
  }
  return false;
}

void check_keys(const json& obj, const std::string& ptr, const std::set<std::string>& allowed) {
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) throw ConfigError(child(ptr, k), "unknown key");
  }
}

bool valid_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

EntrySpec parse_entry(const json& j, const std::string& ptr) {
  if (!j.is_object()) throw ConfigError(ptr, "suite entry must be an object");
  check_keys(j, ptr, {"op", "name", "sample", "params", "thresholds"});
  if (!j.contains("op")) throw ConfigError(child(ptr, "op"), "required");
  if (!j["op"].is_string()) throw ConfigError(child(ptr, "op"), "must be a string");
  EntrySpec e;
  e.op = j["op"].get<std::string>();
  const CatalogEntry* info = nullptr;
  try {
    info = &find_entry(e.op);
  } catch (const ContractError& err) {
    throw ConfigError(child(ptr, "op"), err.what());
  }
  e.name = e.op;
  if (j.contains("name")) {
    if (!j["name"].is_string() || !valid_name(j["name"].get<std::string>())) {
      throw ConfigError(child(ptr, "name"), "must be a non-empty string of letters, digits, '_', '-', '.'");
    }
    e.name = j["name"].get<std::string>();
  }
  e.sample = info->default_sample;
  if (j.contains("sample")) {
    if (!j["sample"].is_string()) throw ConfigError(child(ptr, "sample"), "must be a string");
    if (info->default_sample.empty()) throw ConfigError(child(ptr, "sample"), e.op + " builds its own data");
    e.sample = j["sample"].get<std::string>();
    try {
      corpus::find_sample(e.sample);
    } catch (const ContractError& err) {
      throw ConfigError(child(ptr, "sample"), err.what());
    }
  }
  const json params = j.value("params", json::object());
  if (!params.is_object()) throw ConfigError(child(ptr, "params"), "must be an object");
  for (const auto& [k, v] : params.items()) {
    const auto it = std::find_if(info->params.begin(), info->params.end(), [&](const ParamSpec& p) { return p.name == k; });
    if (it == info->params.end()) throw ConfigError(child(child(ptr, "params"), k), "unknown parameter for " + e.op);
    if (!matches(v, it->kind)) throw ConfigError(child(child(ptr, "params"), k), std::string("must be ") + kind_name(it->kind));
  }
  for (const auto& p : info->params) e.params[p.name] = params.contains(p.name) ? params[p.name] : p.fallback;
  const json thresholds = j.value("thresholds", json::object());
  if (!thresholds.is_object()) throw ConfigError(child(ptr, "thresholds"), "must be an object");
  for (const auto& [k, v] : thresholds.items()) {
    const auto at = child(child(ptr, "thresholds"), k);
    if (std::find(info->metrics.begin(), info->metrics.end(), k) == info->metrics.end()) {
      throw ConfigError(at, "unknown metric for " + e.op);
    }
    if (!is_number_like(v)) throw ConfigError(at, "must be a number");
    e.thresholds[k] = v.is_string() ? (v.get<std::string>() == "inf" ? banach::kInf : -banach::kInf) : v.get<double>();
  }
  return e;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> all = [] {
    std::vector<CatalogEntry> out;
    for (const auto& op : detail::ops()) out.push_back(op.info);
    return out;
  }();
  return all;
}

const CatalogEntry& find_entry(const std::string& op) {
  for (const auto& e : catalog()) {
    if (e.op == op) return e;
  }
  throw ContractError("unknown entry '" + op + "'");
}

std::string describe(const CatalogEntry& e) {
  std::ostringstream out;
  out << e.op << " (" << e.module << ")\n";
  out << "  result: " << e.anchor.result << "\n";
  out << "  quote:  " << e.anchor.quote << "\n";
  out << "  " << e.summary << "\n";
  if (!e.default_sample.empty()) out << "  default sample: " << e.default_sample << "\n";
  if (!e.params.empty()) {
    out << "  params:";
    for (const auto& p : e.params) out << ' ' << p.name << '=' << p.fallback.dump();
    out << "\n";
  }
  out << "  metrics:";
  for (const auto& m : e.metrics) out << ' ' << m;
  out << "\n";
  return out.str();
}

Format format_from_string(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  if (s == "both") return Format::Both;
  throw ContractError("format must be json, csv or both");
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  check_keys(j, "", {"schema_version", "seed", "format", "output_dir", "workers", "suite"});
  if (!j.contains("schema_version")) throw ConfigError("/schema_version", "required");
  if (!j["schema_version"].is_number_integer() || j["schema_version"].get<long long>() != kSchemaVersion) {
    throw ConfigError("/schema_version", "must be " + std::to_string(kSchemaVersion));
  }
  RunConfig c;
  if (j.contains("seed")) {
    if (!is_count(j["seed"])) throw ConfigError("/seed", "must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("format")) {
    if (!j["format"].is_string()) throw ConfigError("/format", "must be a string");
    try {
      c.format = format_from_string(j["format"].get<std::string>());
    } catch (const ContractError& e) {
      throw ConfigError("/format", e.what());
    }
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) throw ConfigError("/output_dir", "must be a string");
    c.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("workers")) {
    if (!is_count(j["workers"])) throw ConfigError("/workers", "must be a non-negative integer");
    c.workers = j["workers"].get<std::size_t>();
  }
  if (j.contains("suite")) {
    if (!j["suite"].is_array()) throw ConfigError("/suite", "must be an array");
    std::set<std::string> names;
    for (std::size_t i = 0; i < j["suite"].size(); ++i) {
      auto e = parse_entry(j["suite"][i], child("/suite", i));
      if (!names.insert(e.name).second) throw ConfigError(child(child("/suite", i), "name"), "duplicate entry name " + e.name);
      c.suite.push_back(std::move(e));
    }
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

std::vector<std::size_t> ladder(std::size_t refine) {
  if (refine < 2 || refine > 8) throw ContractError("refine must be between 2 and 8");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < refine; ++i) out.push_back(std::size_t{32} << i);
  return out;
}

std::uint64_t entry_seed(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : name) h = (h ^ c) * 0x100000001b3ull;
  return splitmix(seed ^ h);
}

reports::Report run_entry(const EntrySpec& spec, const RunContext& ctx) {
  reports::Report r;
  r.entry = spec.name;
  r.op = spec.op;
  r.sample = spec.sample;
  r.params = spec.params;
  try {
    const auto it = std::find_if(detail::ops().begin(), detail::ops().end(),
                                 [&](const detail::Op& o) { return o.info.op == spec.op; });
    if (it == detail::ops().end()) throw ContractError("unknown entry '" + spec.op + "'");
    r.anchor = it->info.anchor;
    it->run(detail::Args{spec, entry_seed(ctx.seed, spec.name), ladder(ctx.refine)}, r);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  for (const auto& [metric, threshold] : spec.thresholds) r.override_threshold(metric, threshold);
  if (r.verdict.empty()) r.verdict = r.pass() ? "PASS" : "FAIL";
  if (!r.error.empty()) r.verdict = "ERROR";
  return r;
}

std::vector<reports::Report> run_suite(const std::vector<EntrySpec>& entries, const RunContext& ctx, std::size_t workers) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(entries.size(), 1));
  std::vector<reports::Report> out(entries.size());
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < entries.size(); i = next++) out[i] = run_entry(entries[i], ctx);
      });
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.entry < b.entry; });
  return out;
}

void write_outputs(const std::vector<reports::Report>& reports, const std::filesystem::path& dir, Format format,
                   const json& metadata) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ostringstream summary;
  reports::write_summary_csv(reports, summary);
  write_file(dir / "summary.csv", summary.str());
  if (format != Format::Csv) {
    json all = json::array();
    for (const auto& r : reports) all.push_back(reports::to_json(r));
    write_file(dir / "summary.json", all.dump(2) + "\n");
  }
  if (!reports.empty()) fs::create_directories(dir / "entries");
  for (const auto& r : reports) {
    if (format != Format::Csv) write_file(dir / "entries" / (r.entry + ".json"), reports::to_json(r).dump(2) + "\n");
    if (format != Format::Json) {
      std::ostringstream table;
      reports::write_table_csv(r, table);
      write_file(dir / "entries" / (r.entry + ".csv"), table.str());
    }
  }
  write_file(dir / "run_metadata.json", metadata.dump(2) + "\n");
}

}  // namespace sobolev::suite
