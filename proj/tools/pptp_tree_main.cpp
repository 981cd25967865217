#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pptp/envelope.hpp"
#include "pptp/instance.hpp"
#include "pptp/merge.hpp"
#include "pptp/oracle.hpp"
#include "pptp/solver.hpp"

namespace {

using pptp::NodeId;
using pptp::TreeInstance;

// Exit codes: 0 success, 1 usage, 2 parse/validation, 3 resource guard.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitGuard = 3;

std::string fmt_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

// Single-line JSON report, fields in insertion order, numbers at 12
// significant digits.
class JsonLine {
 public:
  JsonLine& num(const std::string& key, double v) { return raw(key, fmt_double(v)); }
  JsonLine& integer(const std::string& key, std::uint64_t v) {
    return raw(key, std::to_string(v));
  }
  JsonLine& str(const std::string& key, const std::string& v) {
    return raw(key, "\"" + json_escape(v) + "\"");
  }
  JsonLine& boolean(const std::string& key, bool v) {
    return raw(key, v ? "true" : "false");
  }
  JsonLine& ids(const std::string& key, const std::vector<NodeId>& v) {
    std::string arr = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) arr += ',';
      arr += std::to_string(v[i]);
    }
    return raw(key, arr + "]");
  }
  JsonLine& strings(const std::string& key, const std::vector<std::string>& v) {
    std::string arr = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) arr += ',';
      arr += "\"" + json_escape(v[i]) + "\"";
    }
    return raw(key, arr + "]");
  }
  JsonLine& raw(const std::string& key, const std::string& json) {
    body_ += body_.empty() ? "{\"" : ",\"";
    body_ += json_escape(key) + "\":" + json;
    return *this;
  }
  std::string done() const { return body_ + "}"; }

 private:
  std::string body_;
};

class Timer {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(clock::now() - start_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_ = clock::now();
};

TreeInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pptp::InstanceError({"cannot open file: " + path});
  return pptp::parse_instance(in);
}

// Sink for reports: stdout unless --output redirects.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw pptp::InstanceError({"cannot write file: " + path});
    }
  }
  std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string envelope_json(const pptp::Description& desc) {
  std::string arr = "[";
  for (std::size_t i = 0; i < desc.size(); ++i) {
    const pptp::Record& r = desc.record(i);
    if (i) arr += ',';
    JsonLine rec;
    rec.num("x_min", r.x_min).num("x_max", r.x_max).num("slope", r.slope).num("q", r.q);
    std::vector<NodeId> added = r.delta;
    std::sort(added.begin(), added.end());
    rec.ids("added", added);
    arr += rec.done();
  }
  return arr + "]";
}

struct SolveArgs {
  std::string path;
  std::string output;
  bool envelope_tsv = false;
  bool envelope_json = false;
};

int run_solve(const SolveArgs& args) {
  Timer timer;
  const TreeInstance instance = load_instance(args.path);
  const bool keep = args.envelope_tsv || args.envelope_json;
  const pptp::Solution sol = pptp::solve(instance, keep);

  JsonLine report;
  report.str("instance_name", instance.name())
      .str("command", "solve")
      .num("wall_time_ms", timer.ms())
      .ids("selected", sol.selected)
      .num("expected_profit", sol.expected_profit)
      .num("expected_revenue", sol.expected_revenue)
      .num("expected_cost", sol.expected_cost);
  if (args.envelope_json) report.raw("envelope", envelope_json(*sol.envelope));

  Sink sink(args.output);
  sink.out() << report.done() << "\n";
  if (args.envelope_tsv) pptp::write_envelope_tsv(sink.out(), *sol.envelope);
  return kExitOk;
}

int run_oracle(const std::string& path) {
  Timer timer;
  const TreeInstance instance = load_instance(path);
  const auto result = pptp::oracle::brute_force_solve(instance);
  JsonLine report;
  report.str("instance_name", instance.name())
      .str("command", "oracle")
      .num("wall_time_ms", timer.ms())
      .num("best_profit", result.best_profit)
      .ids("maximal_optimal_set", result.maximal_optimal_set)
      .integer("optima_count", result.all_optima.size());
  std::cout << report.done() << "\n";
  return kExitOk;
}

struct SimArgs {
  std::string path;
  std::string set = "solve";
  std::uint64_t samples = 100000;
  std::uint64_t seed = 42;
};

std::vector<NodeId> parse_set(const std::string& text, const TreeInstance& instance) {
  if (text == "solve") return pptp::solve(instance).selected;
  std::vector<NodeId> ids;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    std::size_t used = 0;
    const int value = std::stoi(token, &used);
    if (used != token.size()) throw std::invalid_argument("bad id: " + token);
    ids.push_back(static_cast<NodeId>(value));
  }
  return ids;
}

int run_simulate(const SimArgs& args) {
  Timer timer;
  const TreeInstance instance = load_instance(args.path);
  std::vector<NodeId> set;
  try {
    set = parse_set(args.set, instance);
  } catch (const std::exception& e) {
    std::cerr << "bad --set value: " << e.what() << "\n";
    return kExitUsage;
  }

  const auto stats = pptp::oracle::simulate(instance, set, args.samples, args.seed);
  const double expected = pptp::oracle::expected_profit(instance, set, 0.0);
  const double diff = std::abs(stats.mean_profit - expected);

  JsonLine report;
  report.str("instance_name", instance.name())
      .str("command", "simulate")
      .num("wall_time_ms", timer.ms())
      .ids("set", set)
      .integer("samples", stats.samples)
      .integer("seed", args.seed)
      .num("mean_profit", stats.mean_profit)
      .num("std_error", stats.std_error)
      .num("mean_revenue", stats.mean_revenue)
      .num("mean_cost", stats.mean_cost)
      .num("expected_profit", expected);
  if (stats.std_error > 0.0) {
    report.num("gap_sigma", diff / stats.std_error);
  } else {
    report.num("gap_sigma", diff == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN());
  }
  std::cout << report.done() << "\n";
  return kExitOk;
}

struct GenArgs {
  NodeId nodes = 10;
  std::uint64_t seed = 1;
  std::string output;
  pptp::GenParams params;
};

int run_gen(const GenArgs& args) {
  Timer timer;
  const TreeInstance instance = pptp::generate_instance(args.nodes, args.seed, args.params);
  {
    std::ofstream out(args.output);
    if (!out) throw pptp::InstanceError({"cannot write file: " + args.output});
    out << pptp::serialize_instance(instance);
  }
  JsonLine report;
  report.str("instance_name", instance.name())
      .str("command", "gen")
      .num("wall_time_ms", timer.ms())
      .integer("nodes", static_cast<std::uint64_t>(instance.size()))
      .integer("customers", instance.customers().size())
      .str("output", args.output);
  std::cout << report.done() << "\n";
  return kExitOk;
}

int run_check(const std::string& path) {
  Timer timer;
  std::vector<std::string> violations;
  std::string name = path;
  try {
    const TreeInstance instance = load_instance(path);
    name = instance.name();
  } catch (const pptp::InstanceError& e) {
    violations = e.violations();
  }
  JsonLine report;
  report.str("instance_name", name)
      .str("command", "check")
      .num("wall_time_ms", timer.ms())
      .boolean("valid", violations.empty())
      .strings("violations", violations);
  std::cout << report.done() << "\n";
  for (const auto& v : violations) std::cerr << v << "\n";
  return violations.empty() ? kExitOk : kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact a priori profitable-tour planning on tree networks"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Optimize the committed customer set");
  solve_cmd->add_option("path", solve_args.path, "instance file")->required();
  solve_cmd->add_flag("--envelope", solve_args.envelope_tsv,
                      "also print the root profit envelope as TSV");
  solve_cmd->add_flag("--envelope-json", solve_args.envelope_json,
                      "embed the root profit envelope in the JSON report");
  solve_cmd->add_option("--output", solve_args.output, "write the report here instead of stdout");

  std::string oracle_path;
  auto* oracle_cmd =
      app.add_subcommand("oracle", "Brute-force optimum by subset enumeration");
  oracle_cmd->add_option("path", oracle_path, "instance file")->required();

  SimArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo check of a committed set");
  sim_cmd->add_option("path", sim_args.path, "instance file")->required();
  sim_cmd->add_option("--set", sim_args.set,
                      "comma-separated customer ids, or 'solve' for the optimizer's set");
  sim_cmd->add_option("--samples", sim_args.samples, "number of sampled days");
  sim_cmd->add_option("--seed", sim_args.seed, "RNG seed");

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance file");
  gen_cmd->add_option("--nodes", gen_args.nodes, "total node count")->required();
  gen_cmd->add_option("--seed", gen_args.seed, "RNG seed");
  gen_cmd->add_option("--output", gen_args.output, "instance file to write")->required();
  gen_cmd->add_option("--max-children", gen_args.params.max_children, "fan-out cap");
  gen_cmd->add_option("--edge-cost-min", gen_args.params.edge_cost_min, "");
  gen_cmd->add_option("--edge-cost-max", gen_args.params.edge_cost_max, "");
  gen_cmd->add_option("--prize-min", gen_args.params.prize_min, "");
  gen_cmd->add_option("--prize-max", gen_args.params.prize_max, "");
  gen_cmd->add_option("--prob-min", gen_args.params.prob_min, "");
  gen_cmd->add_option("--prob-max", gen_args.params.prob_max, "");
  gen_cmd->add_option("--junction-fraction", gen_args.params.junction_fraction,
                      "share of non-root nodes that are junctions");

  std::string check_path;
  auto* check_cmd = app.add_subcommand("check", "Validate an instance file");
  check_cmd->add_option("path", check_path, "instance file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(solve_args);
    if (oracle_cmd->parsed()) return run_oracle(oracle_path);
    if (sim_cmd->parsed()) return run_simulate(sim_args);
    if (gen_cmd->parsed()) return run_gen(gen_args);
    if (check_cmd->parsed()) return run_check(check_path);
  } catch (const pptp::oracle::ResourceGuardError& e) {
    std::cerr << e.what() << "\n";
    return kExitGuard;
  } catch (const pptp::InstanceError& e) {
    for (const auto& v : e.violations()) std::cerr << v << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::out_of_range& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
