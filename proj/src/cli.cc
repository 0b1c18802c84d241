#include "mrs/cli.hh"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mrs/cache.hh"
#include "mrs/engine.hh"
#include "mrs/error.hh"
#include "mrs/json_io.hh"
#include "mrs/search.hh"

namespace mrs {

namespace {

struct CliConfig {
  std::string group;
  int rows = 0;
  int cols = 0;
  int count = 0;
  bool zero_sum = false;
  std::string out;
  std::string format = "json";
  bool trace = false;
  std::string cache_dir;
  double timeout = 0;
  std::int64_t max_nodes = 0;
  std::string input;
};

Budget budget_of(const CliConfig& cfg) {
  Budget b;
  if (cfg.max_nodes > 0) b.max_nodes = cfg.max_nodes;
  b.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(cfg.timeout * 1000));
  return b;
}

std::string render(const RectSet& s, const std::string& format) {
  if (format == "csv") return to_csv(s);
  if (format == "pretty") return to_pretty(s);
  return to_json(s).dump(2) + "\n";
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty())
    out << text;
  else
    write_file_atomic(path, text);
}

nlohmann::json verdict_json(const FeasibilityVerdict& v) {
  nlohmann::json j{{"feasible", v.feasible}, {"reason", to_string(v.reason)}};
  if (v.theta_note) j["theta_note"] = "unique element of order 2";
  return j;
}

int cmd_generate(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const Group g = parse_group(cfg.group);
  EngineOptions opt;
  opt.budget = budget_of(cfg);
  opt.cache = Cache(resolve_cache_dir(cfg.cache_dir));
  opt.zero_sum = cfg.zero_sum;
  if (cfg.max_nodes > 0 || cfg.timeout > 0) opt.fallback_budget = opt.budget;
  BuildResult r = build(g, cfg.rows, cfg.cols, cfg.count, opt);
  if (r.status == BuildStatus::infeasible) {
    out << verdict_json(r.verdict).dump() << "\n";
    return kExitNegative;
  }
  if (r.status == BuildStatus::not_constructed) {
    err << "feasible but not constructed: " << r.note << "\n";
    return kExitNotConstructed;
  }
  std::string text;
  if (cfg.format == "json") {
    nlohmann::json doc = to_json(*r.set);
    if (cfg.trace) doc["trace"] = to_json(*r.trace);
    text = doc.dump(2) + "\n";
  } else {
    text = render(*r.set, cfg.format);
    if (cfg.trace) {
      const std::string trace_path = cfg.out.empty() ? "" : cfg.out + ".trace.json";
      if (trace_path.empty())
        err << to_json(*r.trace).dump() << "\n";
      else
        write_file_atomic(trace_path, to_json(*r.trace).dump(2) + "\n");
    }
  }
  emit(text, cfg.out, out);
  return kExitOk;
}

int cmd_verify(const CliConfig& cfg, std::ostream& out) {
  RectSet s = read_rect_set(cfg.input);
  VerifyReport report = verify(s, {.zero_sum = cfg.zero_sum});
  if (cfg.format == "json") {
    out << to_json(report).dump() << "\n";
  } else if (report.ok) {
    out << "ok\n";
  } else {
    for (const auto& f : report.failures) out << to_string(f.kind) << " " << f.location() << " " << f.detail << "\n";
  }
  return report.ok ? kExitOk : kExitNegative;
}

int cmd_feasible(const CliConfig& cfg, std::ostream& out) {
  auto v = feasible(parse_group(cfg.group), cfg.rows, cfg.cols, cfg.count);
  if (cfg.format == "pretty")
    out << (v.feasible ? "feasible " : "infeasible ") << to_string(v.reason) << (v.theta_note ? " (theta)" : "") << "\n";
  else
    out << verdict_json(v).dump() << "\n";
  return v.feasible ? kExitOk : kExitNegative;
}

int cmd_oracle(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const Group g = parse_group(cfg.group);
  auto v = feasible(g, cfg.rows, cfg.cols, cfg.count);
  OracleResult r = run_oracle(g, cfg.rows, cfg.cols, cfg.count, kOracleCap, budget_of(cfg));
  nlohmann::json j{{"exists", r.exists},
                   {"classifier", verdict_json(v)},
                   {"nodes", r.stats.nodes},
                   {"sum_pairs", r.stats.sum_pairs}};
  if (r.exists != v.feasible) {
    j["disagreement"] = true;
    out << j.dump() << "\n";
    err << "DISAGREEMENT: oracle says " << (r.exists ? "exists" : "none") << ", classifier says "
        << (v.feasible ? "feasible" : "infeasible") << "\n";
    return kExitUsage;
  }
  if (cfg.format == "pretty")
    out << (r.exists ? "existence confirmed" : "nonexistence confirmed") << " (" << r.stats.nodes << " nodes)\n";
  else
    out << j.dump() << "\n";
  if (r.witness && !cfg.out.empty()) write_file_atomic(cfg.out, render(*r.witness, cfg.format == "pretty" ? "json" : cfg.format));
  return r.exists ? kExitOk : kExitNegative;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Magic rectangle sets over finite abelian groups"};
  app.require_subcommand(1, 1);
  CliConfig cfg;

  auto shape_options = [&](CLI::App* sub) {
    sub->add_option("--group", cfg.group, "Group such as Z9+Z2+Z8")->required();
    sub->add_option("--rows", cfg.rows, "Rows a")->required()->check(CLI::PositiveNumber);
    sub->add_option("--cols", cfg.cols, "Columns b")->required()->check(CLI::PositiveNumber);
    sub->add_option("--count", cfg.count, "Number of arrays c")->required()->check(CLI::PositiveNumber);
  };
  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "json, csv or pretty")->check(CLI::IsMember({"json", "csv", "pretty"}));
    sub->add_option("--cache-dir", cfg.cache_dir, "Plan cache directory");
    sub->add_option("--timeout", cfg.timeout, "Search time limit in seconds")->check(CLI::NonNegativeNumber);
    sub->add_option("--max-nodes", cfg.max_nodes, "Search node limit")->check(CLI::PositiveNumber);
  };

  CLI::App* gen = app.add_subcommand("generate", "Construct and print a verified set");
  shape_options(gen);
  common(gen);
  gen->add_flag("--zero-sum", cfg.zero_sum, "Require gamma = delta = 0");
  gen->add_option("--out", cfg.out, "Output path (stdout if absent)");
  gen->add_flag("--trace", cfg.trace, "Include the build trace");

  CLI::App* ver = app.add_subcommand("verify", "Check a set stored as JSON");
  ver->add_option("input", cfg.input, "JSON file")->required();
  ver->add_flag("--zero-sum", cfg.zero_sum, "Also require gamma = delta = 0");
  ver->add_option("--format", cfg.format, "json or pretty")->check(CLI::IsMember({"json", "csv", "pretty"}));

  CLI::App* fea = app.add_subcommand("feasible", "Classify existence");
  shape_options(fea);
  common(fea);

  CLI::App* ora = app.add_subcommand("oracle", "Exhaustive existence check for small groups");
  shape_options(ora);
  common(ora);
  ora->add_option("--out", cfg.out, "Write the witness here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (cfg.format == "csv" && (ver->parsed() || fea->parsed())) cfg.format = "json";
  try {
    if (gen->parsed()) return cmd_generate(cfg, out, err);
    if (ver->parsed()) return cmd_verify(cfg, out);
    if (fea->parsed()) return cmd_feasible(cfg, out);
    return cmd_oracle(cfg, out, err);
  } catch (const VerificationFailed& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace mrs
