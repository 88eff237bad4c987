#include "cli.hpp"

#include <CLI11.hpp>

#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "nocmap/errors.hpp"
#include "nocmap/heuristics.hpp"
#include "nocmap/oracle.hpp"
#include "nocmap/simulator.hpp"
#include "nocmap/workload_io.hpp"

namespace nocmap::cli {

namespace {

struct PlatformFlags {
  std::optional<int> width;
  std::optional<int> height;
  std::string layout_file;

  void attach(CLI::App& cmd) {
    auto* w = cmd.add_option("--width", width, "Mesh width (default layout)")->check(CLI::Range(1, 64));
    auto* h = cmd.add_option("--height", height, "Mesh height (default layout)")->check(CLI::Range(1, 64));
    auto* l = cmd.add_option("--layout-file", layout_file, "Tile kind layout (rows of M/I/R)");
    l->excludes(w)->excludes(h);
  }

  [[nodiscard]] ArchGraph build() const {
    if (!layout_file.empty()) return load_layout(layout_file);
    if (width || height) return ArchGraph::with_default_layout(width.value_or(8), height.value_or(8));
    return ArchGraph::default_platform();
  }
};

std::string heuristic_list() {
  std::string s;
  for (HeuristicKind h : all_heuristics()) {
    if (!s.empty()) s += ", ";
    s += to_string(h);
  }
  return s;
}

HeuristicKind heuristic_or_throw(const std::string& name) {
  if (auto h = parse_heuristic(name)) return *h;
  throw InputError("unknown heuristic '" + name + "' (valid: " + heuristic_list() + ")");
}

std::optional<RoutePolicy> route_override(const std::string& name) {
  if (name.empty()) return std::nullopt;
  if (auto p = parse_route_policy(name)) return *p;
  throw InputError("unknown route policy '" + name + "' (valid: xy, mdijkstra)");
}

Scenario scenario_for(std::vector<TaskGraph> apps, HeuristicKind h, std::uint64_t seed,
                      const ArchGraph& arch, std::optional<RoutePolicy> route) {
  Scenario s = make_scenario(std::move(apps), h, seed, arch);
  if (route) s.route_policy = *route;
  return s;
}

// --- subcommands ---------------------------------------------------------------

struct GenerateFlags {
  std::size_t apps = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_generate(const GenerateFlags& f, std::ostream& out) {
  GenConfig cfg;
  cfg.app_count = f.apps;
  cfg.seed = f.seed;
  const auto apps = generate_workload(cfg);
  save_workload(f.out, apps);
  out << "wrote " << apps.size() << " applications to " << f.out << '\n';
  return kOk;
}

struct RunFlags {
  std::string workload;
  std::string heuristic;
  std::uint64_t seed = 0;
  std::string route;
  PlatformFlags platform;
  std::string out;
  std::string events;
};

int cmd_run(const RunFlags& f, std::ostream& out) {
  const HeuristicKind h = heuristic_or_throw(f.heuristic);
  const auto route = route_override(f.route);
  const ArchGraph arch = f.platform.build();
  auto apps = load_workload(f.workload);
  const SimResult result = simulate(scenario_for(std::move(apps), h, f.seed, arch, route));
  write_report({to_row(result.report)}, f.out);
  if (!f.events.empty()) write_event_log(result.events, f.events);
  out << to_string(h) << " seed " << f.seed << ": makespan " << result.report.makespan
      << " cycles, energy " << result.report.total_energy << '\n';
  return kOk;
}

struct CompareFlags {
  std::string workload;
  std::size_t apps = 0;
  std::string heuristics;
  std::uint64_t seed = 1;
  std::size_t seeds = 20;
  std::string route;
  PlatformFlags platform;
  std::string out;
};

void print_means(const std::vector<ReportRow>& rows, std::ostream& out) {
  struct Sum {
    std::size_t runs = 0;
    double v[9] = {};
  };
  std::map<std::string, Sum> sums;
  for (const auto& r : rows) {
    Sum& s = sums[r.heuristic];
    ++s.runs;
    const double vals[9] = {static_cast<double>(r.makespan_cycles),
                            static_cast<double>(r.total_energy),
                            static_cast<double>(r.energy_compute),
                            static_cast<double>(r.energy_comm),
                            static_cast<double>(r.peak_link_load),
                            r.avg_link_load,
                            static_cast<double>(r.mapping_evaluations),
                            static_cast<double>(r.max_queue_wait),
                            static_cast<double>(r.app_count)};
    for (int i = 0; i < 9; ++i) s.v[i] += vals[i];
  }
  out << "heuristic runs makespan_cycles total_energy energy_compute energy_comm "
         "peak_link_load avg_link_load mapping_evaluations max_queue_wait\n";
  for (const auto& [name, s] : sums) {
    out << name << ' ' << s.runs;
    for (int i = 0; i < 8; ++i) out << ' ' << format_double(s.v[i] / static_cast<double>(s.runs));
    out << '\n';
  }
}

int cmd_compare(const CompareFlags& f, std::ostream& out) {
  std::vector<HeuristicKind> hs;
  if (f.heuristics.empty()) {
    hs = all_heuristics();
  } else {
    std::stringstream list(f.heuristics);
    for (std::string name; std::getline(list, name, ',');) hs.push_back(heuristic_or_throw(name));
  }
  if (hs.empty()) throw InputError("--heuristics is empty");
  if (f.workload.empty() && f.apps == 0) throw InputError("compare needs --workload or --apps");
  const auto route = route_override(f.route);
  const ArchGraph arch = f.platform.build();

  std::optional<std::vector<TaskGraph>> fixed;
  if (!f.workload.empty()) fixed = load_workload(f.workload);

  std::vector<Scenario> cells;
  for (std::size_t k = 0; k < f.seeds; ++k) {
    const std::uint64_t seed = f.seed + k;
    std::vector<TaskGraph> apps;
    if (fixed) {
      apps = *fixed;
    } else {
      GenConfig cfg;
      cfg.app_count = f.apps;
      cfg.seed = seed;
      apps = generate_workload(cfg);
    }
    for (HeuristicKind h : hs) cells.push_back(scenario_for(apps, h, seed, arch, route));
  }
  // Cells are independent; rows are sorted by write_report so thread timing is invisible.
  std::vector<ReportRow> rows;
  for (const auto& r : simulate_all(cells, ExecPolicy::Parallel)) rows.push_back(to_row(r.report));
  write_report(rows, f.out);
  print_means(rows, out);
  return kOk;
}

struct VerifyFlags {
  std::string suite;
  std::uint64_t seed = 1;
  bool inject_fault = false;
};

int cmd_verify(const VerifyFlags& f, std::ostream& out) {
  std::vector<std::string> names = oracle::suite_names();
  if (!f.suite.empty()) names = {f.suite};
  fault::set_flip_tiebreak(f.inject_fault);
  bool ok = true;
  for (const auto& name : names) {
    const oracle::SuiteResult r = oracle::run_suite(name, f.seed);
    out << r.name << ": " << r.checks << " checks, " << r.failures << " failures, "
        << (r.passed() ? "PASS" : "FAIL") << '\n';
    if (!r.passed()) {
      out << "  counterexample: " << r.counterexample << '\n';
      ok = false;
    }
  }
  fault::set_flip_tiebreak(false);
  return ok ? kOk : kOracleFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Runtime task mapping simulator for mesh NoC platforms"};
  app.name("nocmap");
  app.require_subcommand(1);

  GenerateFlags gen;
  auto* generate = app.add_subcommand("generate", "Write a random workload XML file");
  generate->add_option("--apps", gen.apps, "Number of applications")->required()->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen.seed, "Generator seed")->required();
  generate->add_option("--out", gen.out, "Output XML path")->required();

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "Simulate one workload with one heuristic");
  run_cmd->add_option("--workload", run.workload, "Workload XML")->required();
  run_cmd->add_option("--heuristic", run.heuristic, "ff|mmc|mac|nn|pl|bn|spiral")->required();
  run_cmd->add_option("--seed", run.seed, "Seed recorded in the report");
  run_cmd->add_option("--route", run.route, "xy|mdijkstra (default depends on heuristic)");
  run.platform.attach(*run_cmd);
  run_cmd->add_option("--out", run.out, "Report CSV")->required();
  run_cmd->add_option("--events", run.events, "Event log CSV");

  CompareFlags cmp;
  auto* compare = app.add_subcommand("compare", "Sweep heuristics over generated seeds");
  auto* cw = compare->add_option("--workload", cmp.workload, "Fixed workload XML for every seed");
  auto* ca = compare->add_option("--apps", cmp.apps, "Applications per generated workload")
                 ->check(CLI::PositiveNumber);
  cw->excludes(ca);
  compare->add_option("--heuristics", cmp.heuristics, "Comma separated list (default: all)");
  compare->add_option("--seed", cmp.seed, "First seed (default 1)");
  compare->add_option("--seeds", cmp.seeds, "Number of seeds (default 20)")->check(CLI::PositiveNumber);
  compare->add_option("--route", cmp.route, "Route policy for every heuristic");
  cmp.platform.attach(*compare);
  compare->add_option("--out", cmp.out, "Report CSV")->required();

  VerifyFlags ver;
  auto* verify = app.add_subcommand("verify", "Check the implementation against brute-force oracles");
  verify->add_option("--suite", ver.suite, "routing|placement|spiral|ff (default: all)")
      ->check(CLI::IsMember(oracle::suite_names()));
  verify->add_option("--seed", ver.seed, "Seed for random cases");
  verify->add_flag("--inject-fault", ver.inject_fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*generate) return cmd_generate(gen, out);
    if (*run_cmd) return cmd_run(run, out);
    if (*compare) return cmd_compare(cmp, out);
    return cmd_verify(ver, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    // Parse, validation, configuration and simulation problems with the inputs.
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
}

}  // namespace nocmap::cli
