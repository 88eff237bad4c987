#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>
#include <tuple>

#include "nocmap/errors.hpp"
#include "nocmap/workload_io.hpp"

using namespace nocmap;
namespace fs = std::filesystem;

namespace {

fs::path data(const std::string& name) { return fs::path(NOCMAP_TEST_DATA_DIR) / name; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "nocmap_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

template <typename F>
ValidationReason validation_reason(F&& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.reason();
  }
  ADD_FAILURE() << "no validation error";
  return ValidationReason::BadKind;
}

ReportRow sample_row(std::string h, std::uint64_t seed) {
  ReportRow r;
  r.heuristic = std::move(h);
  r.seed = seed;
  r.app_count = 3;
  r.makespan_cycles = 12345;
  r.total_energy = 4000 + seed;
  r.energy_compute = 3000;
  r.energy_comm = 1000 + seed;
  r.peak_link_load = 200;
  r.avg_link_load = 0.1 + static_cast<double>(seed) / 3.0;
  r.mapping_evaluations = 77;
  r.max_queue_wait = seed * 10;
  return r;
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

// --- workload parsing -------------------------------------------------------------

TEST(ParseWorkload, Sample) {
  const auto apps = load_workload(data("sample.xml"));
  ASSERT_EQ(apps.size(), 1u);
  const TaskGraph& g = apps[0];
  EXPECT_EQ(g.app_id(), "app0");
  ASSERT_EQ(g.tasks().size(), 3u);
  EXPECT_EQ(g.tasks()[0].kind, TaskKind::Initial);
  EXPECT_EQ(g.tasks()[1].kind, TaskKind::Software);
  EXPECT_EQ(g.tasks()[2].kind, TaskKind::Hardware);
  ASSERT_EQ(g.edges().size(), 2u);
  EXPECT_EQ(g.edges()[1].master, 1u);
  EXPECT_EQ(g.edges()[1].slave, 2u);
  EXPECT_EQ(g.edges()[1].vms, 100u);
}

TEST(ParseWorkload, InvalidCorpus) {
  EXPECT_EQ(validation_reason([] { (void)load_workload(data("cycle.xml")); }),
            ValidationReason::CyclicGraph);
  EXPECT_EQ(validation_reason([] { (void)load_workload(data("multi_root.xml")); }),
            ValidationReason::MultipleRoots);
  EXPECT_EQ(validation_reason([] { (void)load_workload(data("dangling.xml")); }),
            ValidationReason::UnknownTask);
  EXPECT_EQ(validation_reason([] { (void)load_workload(data("negative_volume.xml")); }),
            ValidationReason::BadVolume);
  EXPECT_EQ(validation_reason([] { (void)load_workload(data("bad_kind.xml")); }),
            ValidationReason::BadKind);
}

TEST(ParseWorkload, ErrorMessages) {
  try {
    (void)load_workload(data("cycle.xml"));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("cyclic graph"), std::string::npos);
  }
  try {
    (void)load_workload(data("multi_root.xml"));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("multiple roots"), std::string::npos);
  }
  try {
    (void)load_workload(data("dangling.xml"));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown task"), std::string::npos);
  }
}

TEST(ParseWorkload, MalformedXmlReportsLine) {
  try {
    (void)load_workload(data("malformed.xml"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 8);
  }
  try {
    (void)parse_workload("<workload version=\"1\">\n  <application id=\"a\">\n    <bogus/>\n"
                         "  </application>\n</workload>\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW((void)parse_workload("<workload version=\"2\"></workload>"), ParseError);
  EXPECT_THROW((void)parse_workload("<other/>"), ParseError);
  EXPECT_THROW((void)parse_workload(
                   "<workload version=\"1\"><application id=\"a\"><task id=\"t0\" kind=\"initial\" "
                   "instructions=\"ten\"/></application></workload>"),
               ParseError);
}

TEST(ParseWorkload, DuplicateApplicationIds) {
  const std::string app =
      "<application id=\"a\"><task id=\"t0\" kind=\"initial\" instructions=\"1\"/></application>";
  EXPECT_THROW((void)parse_workload("<workload version=\"1\">" + app + app + "</workload>"),
               ValidationError);
}

TEST(ParseWorkload, MissingFileIsIoError) {
  EXPECT_THROW((void)load_workload(data("does_not_exist.xml")), IoError);
}

TEST(SerializeWorkload, CanonicalForm) {
  const auto apps = load_workload(data("sample.xml"));
  const std::string text = serialize_workload(apps);
  EXPECT_EQ(text.rfind("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<workload version=\"1\">\n", 0), 0u);
  EXPECT_NE(text.find("  <application id=\"app0\">\n"), std::string::npos);
  EXPECT_NE(text.find("    <edge master=\"t1\" slave=\"t2\" vms=\"100\" vsm=\"100\"/>\n"),
            std::string::npos);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(parse_workload(text), apps);
  EXPECT_EQ(serialize_workload(parse_workload(text)), text);
}

TEST(SerializeWorkload, RoundTripGenerated) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    GenConfig cfg;
    cfg.app_count = 1 + seed % 10;
    cfg.seed = seed;
    const auto apps = generate_workload(cfg);
    ASSERT_EQ(parse_workload(serialize_workload(apps)), apps);
  }
}

// --- generation ----------------------------------------------------------------------

TEST(Generate, DeterministicBySeed) {
  GenConfig cfg;
  cfg.app_count = 10;
  cfg.seed = 42;
  EXPECT_EQ(serialize_workload(generate_workload(cfg)), serialize_workload(generate_workload(cfg)));
  GenConfig other = cfg;
  other.seed = 43;
  EXPECT_NE(serialize_workload(generate_workload(cfg)), serialize_workload(generate_workload(other)));
}

TEST(Generate, BoundsOverManySeeds) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    const auto apps = generate_workload(cfg);
    ASSERT_EQ(apps.size(), 1u);
    const TaskGraph& g = apps[0];
    ASSERT_NO_THROW(g.validate());
    ASSERT_GE(g.tasks().size(), 7u);
    ASSERT_LE(g.tasks().size(), 9u);
    ASSERT_EQ(g.tasks()[0].kind, TaskKind::Initial);
    ASSERT_EQ(g.edges().size(), g.tasks().size() - 1);  // tree
    for (std::size_t t = 1; t < g.tasks().size(); ++t) {
      ASSERT_EQ(g.in_edges(t).size(), 1u);
      ASSERT_LT(g.edges()[g.in_edges(t)[0]].master, t);
      ASSERT_NE(g.tasks()[t].kind, TaskKind::Initial);
      ASSERT_EQ(g.tasks()[t].instructions, 100u);
    }
    for (const Edge& e : g.edges()) {
      ASSERT_EQ(e.vms, 100u);
      ASSERT_EQ(e.vsm, 100u);
    }
  }
}

TEST(Generate, TaskCountsCoverTheRange) {
  std::set<std::size_t> sizes;
  GenConfig cfg;
  cfg.app_count = 200;
  cfg.seed = 5;
  for (const auto& g : generate_workload(cfg)) sizes.insert(g.tasks().size());
  EXPECT_EQ(sizes, (std::set<std::size_t>{7, 8, 9}));
}

TEST(Generate, ZeroHardwareProbability) {
  GenConfig cfg;
  cfg.app_count = 1000;
  cfg.hw_task_probability = 0.0;
  cfg.seed = 12;
  for (const auto& g : generate_workload(cfg)) {
    for (const Task& t : g.tasks()) ASSERT_NE(t.kind, TaskKind::Hardware);
  }
}

TEST(Generate, HardwareShareNearProbability) {
  GenConfig cfg;
  cfg.app_count = 2000;
  cfg.seed = 3;
  std::size_t hw = 0;
  std::size_t slaves = 0;
  for (const auto& g : generate_workload(cfg)) {
    for (std::size_t t = 1; t < g.tasks().size(); ++t) {
      ++slaves;
      hw += g.tasks()[t].kind == TaskKind::Hardware ? 1 : 0;
    }
  }
  const double share = static_cast<double>(hw) / static_cast<double>(slaves);
  EXPECT_NEAR(share, 14.0 / 63.0, 0.02);
}

TEST(Generate, ConfigValidation) {
  GenConfig cfg;
  cfg.app_count = 0;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg = GenConfig{};
  cfg.min_tasks = 5;
  cfg.max_tasks = 4;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg = GenConfig{};
  cfg.hw_task_probability = 1.5;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg = GenConfig{};
  cfg.vms = 0;
  cfg.vsm = 0;
  EXPECT_THROW(cfg.validate(), InputError);
}

// --- reports ----------------------------------------------------------------------

TEST(Report, SortedRowsAndRoundTrip) {
  std::vector<ReportRow> rows;
  for (const char* h : {"spiral", "bn", "nn"}) {
    for (std::uint64_t s : {2u, 1u}) rows.push_back(sample_row(h, s));
  }
  const std::string text = format_report(rows);
  EXPECT_EQ(count_lines(text), 7u);
  EXPECT_EQ(text.substr(0, text.find('\n')), kReportHeader);
  const auto back = parse_report(text);
  ASSERT_EQ(back.size(), 6u);
  EXPECT_EQ(back[0].heuristic, "bn");
  EXPECT_EQ(back[0].seed, 1u);
  EXPECT_EQ(back[5].heuristic, "spiral");
  EXPECT_EQ(back[5].seed, 2u);
  auto sorted = rows;
  std::sort(sorted.begin(), sorted.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.heuristic, a.seed) < std::tie(b.heuristic, b.seed);
  });
  EXPECT_EQ(back, sorted);  // doubles survive exactly
  EXPECT_EQ(format_report(back), text);
}

TEST(Report, WriteErrors) {
  EXPECT_THROW(write_report({}, scratch("empty.csv")), InputError);
  EXPECT_THROW(write_report({sample_row("nn", 1)}, "/nonexistent_dir/x/r.csv"), IoError);
  const fs::path p = scratch("r.csv");
  write_report({sample_row("nn", 1)}, p);
  const std::string first = read_file(p);
  write_report({sample_row("nn", 1)}, p);
  EXPECT_EQ(read_file(p), first);
}

TEST(Report, ParseRejectsBadInput) {
  EXPECT_THROW((void)parse_report("nope\n"), ParseError);
  EXPECT_THROW((void)parse_report(std::string(kReportHeader) + "\nnn,1,2\n"), ParseError);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(9.56815441135229), "9.56815441135229");
  const double v = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_double(v)), v);
}

// --- event log --------------------------------------------------------------------

TEST(EventLog, RoundTrip) {
  std::vector<EventRecord> evs;
  EventRecord a;
  a.cycle = 0;
  a.kind = EventKind::AppAdmit;
  a.app = "app0";
  a.task = "t0";
  a.tile = Coord{1, 1};
  a.cluster = 0;
  evs.push_back(a);
  EventRecord c;
  c.cycle = 4000;
  c.kind = EventKind::CommStart;
  c.app = "app0";
  c.task = "t0";
  c.peer = "t1";
  c.tile = Coord{1, 1};
  c.volume = 100;
  c.hops = 2;
  c.path = {{1, 1}, {2, 1}, {2, 2}};
  evs.push_back(c);
  EventRecord e;
  e.cycle = 8000;
  e.kind = EventKind::ComputeEnd;
  e.app = "app0";
  e.task = "t1";
  e.tile = Coord{2, 2};
  e.tile_kind = TileKind::ISP;
  e.instructions = 100;
  evs.push_back(e);
  const std::string text = format_event_log(evs);
  EXPECT_EQ(text.substr(0, text.find('\n')), kEventLogHeader);
  EXPECT_NE(text.find("4000,comm_start,app0,t0,t1,1:1,,0,100,2,-1,1:1>2:1>2:2\n"), std::string::npos);
  EXPECT_EQ(parse_event_log(text), evs);
}

// --- layouts ------------------------------------------------------------------------

TEST(Layout, ParseFile) {
  const ArchGraph a = load_layout(data("layout_4x4.txt"));
  EXPECT_EQ(a.width(), 4);
  EXPECT_EQ(a.height(), 4);
  EXPECT_EQ(a.manager(), (Coord{0, 0}));
  EXPECT_EQ(a.count(TileKind::RA), 3u);
  EXPECT_EQ(a.kind({1, 1}), TileKind::RA);
  EXPECT_EQ(a.kind({3, 3}), TileKind::RA);
}

TEST(Layout, Errors) {
  EXPECT_THROW((void)parse_layout("MI\nI\n"), ParseError);
  EXPECT_THROW((void)parse_layout("MX\nII\n"), ParseError);
  EXPECT_THROW((void)parse_layout("II\nII\n"), InputError);
  EXPECT_THROW((void)parse_layout("# only comments\n"), ParseError);
}
