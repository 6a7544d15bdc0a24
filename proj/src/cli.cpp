#include "heatex/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heatex/config.hpp"
#include "heatex/errors.hpp"
#include "heatex/harness.hpp"
#include "heatex/report_io.hpp"

namespace heatex {
namespace {

using nlohmann::json;

struct Invocation {
  std::string command;
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
  std::vector<std::string> sets;
  std::vector<std::string> positional;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  bool allow_inconclusive = false;
  bool defect_mode = false;
  bool both_definitions = false;
  bool compare_mode = false;
};

using Runner = std::function<Report(ExperimentConfig const&, RunOptions const&)>;

std::map<std::string, std::pair<Runner, char const*>> const& commands() {
  static std::map<std::string, std::pair<Runner, char const*>> const table{
      {"verify", {run_experiment, "Compare both sides of the identity on the z grid"}},
      {"sweep", {coupling_sweep, "Identity defect across a decreasing coupling sweep"}},
      {"moments", {moment_check, "Ordered/Renyi-side moments against direct moments"}},
      {"charfn", {charfn_check, "Characteristic function against the P(Q) Fourier sum"}},
      {"distribution", {distribution_report, "Two-point-measurement heat distribution"}},
      {"sample", {sample_report, "Classical trajectory ensemble with hygiene checks"}},
  };
  return table;
}

json load_document(Invocation const& inv) {
  json doc = json::object();
  if (inv.config_path) {
    std::ifstream in(*inv.config_path);
    if (!in) throw IoError("cannot open config file " + *inv.config_path);
    try {
      doc = json::parse(in);
    } catch (json::parse_error const& e) {
      throw ConfigError("config file " + *inv.config_path + " is not valid JSON: " +
                        e.what());
    }
  }
  std::vector<std::string> overrides = inv.sets;
  overrides.insert(overrides.end(), inv.positional.begin(), inv.positional.end());
  for (auto const& kv : overrides) {
    auto const eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("override \"" + kv + "\" must be KEY=VALUE");
    }
    apply_override(doc, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (inv.both_definitions) doc["output"]["both_definitions"] = true;
  return doc;
}

ExperimentConfig resolve_config(Invocation const& inv) {
  json const doc = load_document(inv);
  ExperimentConfig config = config_from_json(doc);
  if (inv.seed) {
    if (config.regime == Regime::classical) {
      config.sampler.seed = *inv.seed;
    } else if (config.quantum_model.kind == "random") {
      config.quantum_model.seed = *inv.seed;
    }
  }
  return config;
}

std::filesystem::path output_directory(Invocation const& inv,
                                       ExperimentConfig const& config) {
  if (inv.out_dir) return *inv.out_dir;
  if (config.output_directory) return *config.output_directory;
  if (char const* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return "heatex-out";
}

constexpr std::size_t kMaxListed = 10;

void print_failures(Report const& r, std::ostream& err) {
  std::size_t listed = 0;
  std::size_t total = 0;
  // Counts every bad verdict; only the first few are printed.
  auto bad = [&](Verdict v) {
    if (v != Verdict::fail && v != Verdict::inconclusive) return false;
    ++total;
    return listed++ < kMaxListed;
  };
  for (auto const& row : r.identity) {
    if (bad(row.verdict)) {
      err << "  " << to_string(row.verdict) << ": identity z = "
          << format_number(row.z) << " defect = " << format_number(row.defect)
          << (row.note.empty() ? "" : " (" + row.note + ")") << "\n";
    }
  }
  for (auto const& c : r.checks) {
    if (bad(c.verdict)) {
      err << "  " << to_string(c.verdict) << ": " << c.name << " defect = "
          << format_number(c.defect) << " tolerance = " << format_number(c.tolerance)
          << "\n";
    }
  }
  for (auto const& m : r.moments) {
    if (bad(m.verdict)) {
      err << "  " << to_string(m.verdict) << ": moment n = " << m.n
          << " defect = " << format_number(m.defect) << "\n";
    }
  }
  for (auto const& s : r.sweep) {
    if (bad(s.verdict)) {
      err << "  " << to_string(s.verdict) << ": sweep coupling = "
          << format_number(s.coupling) << " defect = " << format_number(s.defect)
          << "\n";
    }
  }
  if (total > kMaxListed) {
    err << "  ... and " << (total - kMaxListed) << " more (see the output tables)\n";
  }
}

int execute(Invocation const& inv, std::ostream& out, std::ostream& err) {
  ExperimentConfig const config = resolve_config(inv);
  RunOptions opts;
  opts.workers = inv.workers;
  opts.defect_mode = inv.defect_mode;
  Report const report = commands().at(inv.command).first(config, opts);
  std::filesystem::path const dir = output_directory(inv, config);
  WriteOptions wopts;
  wopts.compare_mode = inv.compare_mode;
  write_report(report, dir, wopts);

  std::size_t const fails = report.count(Verdict::fail);
  std::size_t const inconclusive = report.count(Verdict::inconclusive);
  out << "heatex " << inv.command << ": " << report.count(Verdict::pass)
      << " pass, " << fails << " fail, " << inconclusive << " inconclusive, "
      << report.count(Verdict::skipped) << " skipped -> " << dir.string() << "\n";
  print_failures(report, err);
  if (fails > 0) return kExitFail;
  if (inconclusive > 0 && !inv.allow_inconclusive) return kExitFail;
  return kExitPass;
}

}  // namespace

int run_cli(int argc, char const* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"heatex: heat-exchange fluctuation identities and Renyi divergences"};
  app.require_subcommand(1);
  Invocation inv;
  unsigned const hw = std::max(1u, std::thread::hardware_concurrency());
  inv.workers = hw;

  for (auto const& [name, entry] : commands()) {
    CLI::App* sub = app.add_subcommand(name, entry.second);
    sub->add_option("--config,-c", inv.config_path, "JSON config file");
    sub->add_option("--out,-o", inv.out_dir, "Output directory");
    sub->add_option("--set,-s", inv.sets, "Override KEY=VALUE (repeatable)");
    sub->add_option("overrides", inv.positional, "Overrides KEY=VALUE");
    sub->add_option("--seed", inv.seed, "Seed (classical sampler, random model)");
    sub->add_option("--workers,-j", inv.workers, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--allow-inconclusive", inv.allow_inconclusive,
                  "Do not fail on inconclusive verdicts");
    sub->add_flag("--defect-mode", inv.defect_mode,
                  "Report non-conserving identity rows as measurements");
    sub->add_flag("--both-definitions", inv.both_definitions,
                  "Emit via_b and via_a distributions");
    sub->add_flag("--compare-mode", inv.compare_mode,
                  "Omit timings so outputs compare byte-for-byte");
    sub->callback([&inv, n = name] { inv.command = n; });
  }

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (CLI::ParseError const& e) {
    int const code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    return execute(inv, out, err);
  } catch (ConfigError const& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (IoError const& e) {
    err << "io error: " << e.what() << "\n";
    return kExitConfig;
  } catch (Error const& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  } catch (std::exception const& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
}

}  // namespace heatex
