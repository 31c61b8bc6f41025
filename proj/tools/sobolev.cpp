// sobolev: run verification suites, list and describe catalog entries.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>

#include "sobolev/errors.hpp"
#include "sobolev/suite.hpp"

namespace {

using namespace sobolev;

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::uint64_t parse_seed(const std::string& text, const std::string& origin) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || text[0] == '-') {
    throw suite::ConfigError("", origin + " is not a non-negative integer: '" + text + "'");
  }
  return v;
}

struct RunOptions {
  std::string config;
  std::string out;
  std::optional<std::string> seed;
  std::string format;
  std::string entry;
  std::size_t refine = 4;
};

int run(const RunOptions& o) {
  suite::RunConfig cfg;
  try {
    cfg = suite::load_config(o.config);
    if (o.seed) {
      cfg.seed = parse_seed(*o.seed, "--seed");
    } else if (const char* env = std::getenv("SOBOLEV_BANACH_SEED"); env && *env) {
      cfg.seed = parse_seed(env, "SOBOLEV_BANACH_SEED");
    }
    if (!o.format.empty()) cfg.format = suite::format_from_string(o.format);
    if (!o.out.empty()) cfg.output_dir = o.out;
    if (!o.entry.empty()) {
      std::erase_if(cfg.suite, [&](const suite::EntrySpec& e) { return e.name != o.entry; });
      if (cfg.suite.empty()) throw suite::ConfigError("/suite", "no entry named '" + o.entry + "'");
    }
    suite::ladder(o.refine);
  } catch (const suite::ConfigError& e) {
    std::cerr << "config error at '" << e.pointer << "': " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  const suite::RunContext ctx{cfg.seed, o.refine};
  const auto reports = suite::run_suite(cfg.suite, ctx, cfg.workers);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  bool errors = false, failures = false;
  for (const auto& r : reports) {
    errors = errors || !r.error.empty();
    failures = failures || !r.pass();
    std::cout << (r.pass() ? "PASS  " : (r.error.empty() ? "FAIL  " : "ERROR ")) << r.entry << " [" << r.verdict << "]";
    if (!r.error.empty()) std::cout << " " << r.error;
    for (const auto& m : r.metrics) {
      if (!m.pass) std::cout << " " << m.name << "=" << m.value << " (" << reports::to_string(m.comparator) << m.threshold << ")";
    }
    std::cout << "\n";
  }
  nlohmann::json meta{{"started", started},
                      {"finished", utc_now()},
                      {"elapsed_seconds", secs},
                      {"config", o.config},
                      {"seed", cfg.seed},
                      {"refine", o.refine},
                      {"workers", cfg.workers},
                      {"entries", reports.size()}};
  try {
    suite::write_outputs(reports, cfg.output_dir, cfg.format, meta);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cout << reports.size() << " entries, " << secs << " s, output in " << cfg.output_dir.string() << "\n";
  if (errors) return 1;
  return failures ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sobolev calculus for Banach-space-valued functions: verification suites"};
  app.require_subcommand(1);

  RunOptions opts;
  auto* run_cmd = app.add_subcommand("run", "Run the entries of a suite config");
  run_cmd->add_option("config", opts.config, "Suite config (JSON, schema_version 1)")->required();
  run_cmd->add_option("--out", opts.out, "Output directory (overrides output_dir)");
  run_cmd->add_option("--seed", opts.seed, "Seed (overrides SOBOLEV_BANACH_SEED and the config)");
  run_cmd->add_option("--format", opts.format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
  run_cmd->add_option("--entry", opts.entry, "Run only the entry with this name");
  run_cmd->add_option("--refine", opts.refine, "Refinement ladder levels: 32, 64, ... (2 to 8)")
      ->check(CLI::Range(2, 8));

  auto* list_cmd = app.add_subcommand("list-entries", "List catalog entries");
  std::string name;
  auto* describe_cmd = app.add_subcommand("describe", "Describe one catalog entry");
  describe_cmd->add_option("entry", name, "Entry name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*run_cmd) return run(opts);
  if (*list_cmd) {
    for (const auto& e : suite::catalog()) std::cout << e.op << "\t" << e.module << "\t" << e.anchor.result << "\n";
    return 0;
  }
  try {
    std::cout << suite::describe(suite::find_entry(name));
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
