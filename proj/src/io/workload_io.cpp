#include "nocmap/workload_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <new>
#include <random>
#include <sstream>

#include <expat.h>

#include "nocmap/errors.hpp"

namespace nocmap {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(std::begin(buf), std::end(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

// Element tree with source lines, built by expat (which rejects anything not well-formed).
struct Element {
  std::string name;
  std::map<std::string, std::string> attrs;
  std::vector<Element> children;
  std::size_t line = 0;
};

struct TreeBuilder {
  XML_Parser parser;
  Element root;  // synthetic document node
  std::vector<Element*> open{&root};
  std::size_t text_line = 0;  // first stray non-whitespace text, if any

  static void on_start(void* self, const XML_Char* name, const XML_Char** attrs) {
    auto* b = static_cast<TreeBuilder*>(self);
    Element e;
    e.name = name;
    e.line = XML_GetCurrentLineNumber(b->parser);
    for (std::size_t i = 0; attrs[i]; i += 2) e.attrs[attrs[i]] = attrs[i + 1];
    b->open.back()->children.push_back(std::move(e));
    b->open.push_back(&b->open.back()->children.back());
  }
  static void on_end(void* self, const XML_Char*) { static_cast<TreeBuilder*>(self)->open.pop_back(); }
  static void on_text(void* self, const XML_Char* s, int len) {
    auto* b = static_cast<TreeBuilder*>(self);
    const std::string_view text(s, static_cast<std::size_t>(len));
    if (!b->text_line && text.find_first_not_of(" \t\r\n") != std::string_view::npos)
      b->text_line = XML_GetCurrentLineNumber(b->parser);
  }
};

Element parse_xml(std::string_view text) {
  TreeBuilder b;
  b.parser = XML_ParserCreate("UTF-8");
  if (!b.parser) throw std::bad_alloc();
  XML_SetUserData(b.parser, &b);
  XML_SetElementHandler(b.parser, &TreeBuilder::on_start, &TreeBuilder::on_end);
  XML_SetCharacterDataHandler(b.parser, &TreeBuilder::on_text);
  const auto status = XML_Parse(b.parser, text.data(), static_cast<int>(text.size()), XML_TRUE);
  if (status != XML_STATUS_OK) {
    const std::string msg = XML_ErrorString(XML_GetErrorCode(b.parser));
    const std::size_t line = XML_GetCurrentLineNumber(b.parser);
    XML_ParserFree(b.parser);
    throw ParseError("malformed XML: " + msg, line);
  }
  XML_ParserFree(b.parser);
  if (b.text_line) throw ParseError("unexpected text content", b.text_line);
  return std::move(b.root);
}

std::uint64_t parse_count(const std::string& text, const std::string& what,
                          ValidationReason negative_reason, std::size_t line) {
  std::int64_t value = 0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ParseError(what + ": not an integer '" + text + "'", line);
  }
  if (value < 0) throw ValidationError(negative_reason, what + " = " + text);
  return static_cast<std::uint64_t>(value);
}

const std::string& required_attr(const Element& e, const std::string& name) {
  const auto it = e.attrs.find(name);
  if (it == e.attrs.end()) throw ParseError("<" + e.name + "> is missing attribute '" + name + "'", e.line);
  return it->second;
}

}  // namespace

std::vector<TaskGraph> parse_workload(std::string_view text) {
  const Element doc = parse_xml(text);
  // expat guarantees exactly one root element.
  const Element& workload = doc.children.at(0);
  if (workload.name != "workload") throw ParseError("expected a <workload> root", workload.line);
  const std::string& version = required_attr(workload, "version");
  if (version != "1") throw ParseError("unsupported workload version '" + version + "'", workload.line);

  std::vector<TaskGraph> apps;
  for (const Element& app : workload.children) {
    if (app.name != "application") {
      throw ParseError("unexpected element <" + app.name + "> in <workload>", app.line);
    }
    TaskGraph graph(required_attr(app, "id"));
    for (const Element& node : app.children) {
      if (!node.children.empty()) {
        throw ParseError("unexpected element <" + node.children[0].name + "> in <" + node.name + ">",
                         node.children[0].line);
      }
      if (node.name == "task") {
        const std::string& id = required_attr(node, "id");
        const auto kind = parse_task_kind(required_attr(node, "kind"));
        if (!kind) throw ValidationError(ValidationReason::BadKind, graph.app_id() + "/" + id);
        graph.add_task(id, *kind,
                       parse_count(required_attr(node, "instructions"),
                                   graph.app_id() + "/" + id + " instructions",
                                   ValidationReason::BadInstructions, node.line));
      } else if (node.name == "edge") {
        const std::string& master = required_attr(node, "master");
        const std::string& slave = required_attr(node, "slave");
        const std::string label = graph.app_id() + "/" + master + "->" + slave;
        graph.add_edge(master, slave,
                       parse_count(required_attr(node, "vms"), label + " vms",
                                   ValidationReason::BadVolume, node.line),
                       parse_count(required_attr(node, "vsm"), label + " vsm",
                                   ValidationReason::BadVolume, node.line));
      } else {
        throw ParseError("unexpected element <" + node.name + "> in <application>", node.line);
      }
    }
    graph.validate();
    apps.push_back(std::move(graph));
  }
  for (std::size_t i = 0; i < apps.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (apps[i].app_id() == apps[j].app_id()) {
        throw ValidationError(ValidationReason::DuplicateTask,
                              "application id '" + apps[i].app_id() + "' repeated");
      }
    }
  }
  return apps;
}

std::vector<TaskGraph> load_workload(const std::filesystem::path& path) {
  return parse_workload(read_file(path));
}

std::string serialize_workload(const std::vector<TaskGraph>& apps) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<workload version=\"1\">\n";
  for (const auto& g : apps) {
    out << "  <application id=\"" << g.app_id() << "\">\n";
    for (const auto& t : g.tasks()) {
      out << "    <task id=\"" << t.id << "\" kind=\"" << to_string(t.kind)
          << "\" instructions=\"" << t.instructions << "\"/>\n";
    }
    for (const auto& e : g.edges()) {
      out << "    <edge master=\"" << g.task(e.master).id << "\" slave=\"" << g.task(e.slave).id
          << "\" vms=\"" << e.vms << "\" vsm=\"" << e.vsm << "\"/>\n";
    }
    out << "  </application>\n";
  }
  out << "</workload>\n";
  return out.str();
}

void save_workload(const std::filesystem::path& path, const std::vector<TaskGraph>& apps) {
  write_file(path, serialize_workload(apps));
}

// --- generation ------------------------------------------------------------------

void GenConfig::validate() const {
  if (app_count < 1) throw InputError("app_count must be at least 1");
  if (min_tasks < 1 || min_tasks > max_tasks) throw InputError("empty tasks-per-app range");
  if (!(hw_task_probability >= 0.0 && hw_task_probability <= 1.0)) {
    throw InputError("hardware task probability must lie in [0, 1]");
  }
  if (vms + vsm < 1) throw InputError("edge volume must be positive in some direction");
  if (instructions < 1) throw InputError("instructions per task must be at least 1");
}

namespace {

// Explicit draws instead of <random> distributions, whose output is implementation-defined.
std::uint64_t draw_between(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + rng() % (hi - lo + 1);
}

bool draw_bernoulli(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

}  // namespace

std::vector<TaskGraph> generate_workload(const GenConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::vector<TaskGraph> apps;
  apps.reserve(cfg.app_count);
  for (std::size_t a = 0; a < cfg.app_count; ++a) {
    TaskGraph g("app" + std::to_string(a));
    const auto n = static_cast<std::size_t>(draw_between(rng, cfg.min_tasks, cfg.max_tasks));
    g.add_task("t0", TaskKind::Initial, cfg.instructions);
    for (std::size_t t = 1; t < n; ++t) {
      const TaskKind kind =
          draw_bernoulli(rng, cfg.hw_task_probability) ? TaskKind::Hardware : TaskKind::Software;
      g.add_task("t" + std::to_string(t), kind, cfg.instructions);
      const auto master = draw_between(rng, 0, t - 1);
      g.add_edge("t" + std::to_string(master), "t" + std::to_string(t), cfg.vms, cfg.vsm);
    }
    apps.push_back(std::move(g));
  }
  return apps;
}

// --- reports -----------------------------------------------------------------------

ReportRow to_row(const SimReport& r) {
  return ReportRow{std::string(to_string(r.heuristic)),
                   r.seed,
                   r.app_count,
                   r.makespan,
                   r.total_energy,
                   r.energy_compute,
                   r.energy_comm,
                   r.peak_link_load,
                   r.avg_link_load,
                   r.mapping_evaluations,
                   r.max_queue_wait()};
}

std::string format_report(std::vector<ReportRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.heuristic, a.seed) < std::tie(b.heuristic, b.seed);
  });
  std::ostringstream out;
  out << kReportHeader << '\n';
  for (const auto& r : rows) {
    out << r.heuristic << ',' << r.seed << ',' << r.app_count << ',' << r.makespan_cycles << ','
        << r.total_energy << ',' << r.energy_compute << ',' << r.energy_comm << ','
        << r.peak_link_load << ',' << format_double(r.avg_link_load) << ','
        << r.mapping_evaluations << ',' << r.max_queue_wait << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    fields.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

template <typename T>
T parse_number(const std::string& field, std::size_t line) {
  T value{};
  const char* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ParseError("bad numeric field '" + field + "'", line);
  }
  return value;
}

}  // namespace

std::vector<ReportRow> parse_report(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines.front() != kReportHeader) throw ParseError("missing report header", 1);
  std::vector<ReportRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split(lines[i], ',');
    if (f.size() != 11) throw ParseError("expected 11 report fields", i + 1);
    rows.push_back(ReportRow{f[0], parse_number<std::uint64_t>(f[1], i + 1),
                             parse_number<std::size_t>(f[2], i + 1),
                             parse_number<std::uint64_t>(f[3], i + 1),
                             parse_number<std::uint64_t>(f[4], i + 1),
                             parse_number<std::uint64_t>(f[5], i + 1),
                             parse_number<std::uint64_t>(f[6], i + 1),
                             parse_number<std::uint64_t>(f[7], i + 1),
                             parse_number<double>(f[8], i + 1),
                             parse_number<std::uint64_t>(f[9], i + 1),
                             parse_number<std::uint64_t>(f[10], i + 1)});
  }
  return rows;
}

void write_report(const std::vector<ReportRow>& rows, const std::filesystem::path& path) {
  if (rows.empty()) throw InputError("report has no rows");
  write_file(path, format_report(rows));
}

// --- event log ---------------------------------------------------------------------

namespace {

std::string format_coord(Coord c) { return std::to_string(c.x) + ":" + std::to_string(c.y); }

Coord parse_coord(const std::string& text, std::size_t line) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw ParseError("bad tile '" + text + "'", line);
  return Coord{parse_number<int>(parts[0], line), parse_number<int>(parts[1], line)};
}

std::optional<TileKind> parse_tile_kind(std::string_view text) {
  for (TileKind k : {TileKind::ISP, TileKind::RA, TileKind::Manager}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

}  // namespace

std::string format_event_log(const std::vector<EventRecord>& events) {
  std::ostringstream out;
  out << kEventLogHeader << '\n';
  for (const auto& e : events) {
    out << e.cycle << ',' << to_string(e.kind) << ',' << e.app << ',' << e.task << ',' << e.peer
        << ',' << (e.tile ? format_coord(*e.tile) : "") << ','
        << (e.tile_kind ? to_string(*e.tile_kind) : "") << ',' << e.instructions << ','
        << e.volume << ',' << e.hops << ',' << e.cluster << ',';
    for (std::size_t i = 0; i < e.path.size(); ++i) {
      if (i) out << '>';
      out << format_coord(e.path[i]);
    }
    out << '\n';
  }
  return out.str();
}

std::vector<EventRecord> parse_event_log(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines.front() != kEventLogHeader) {
    throw ParseError("missing event log header", 1);
  }
  std::vector<EventRecord> events;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::size_t n = i + 1;
    const auto f = split(lines[i], ',');
    if (f.size() != 12) throw ParseError("expected 12 event fields", n);
    EventRecord e;
    e.cycle = parse_number<std::uint64_t>(f[0], n);
    const auto kind = parse_event_kind(f[1]);
    if (!kind) throw ParseError("unknown event '" + f[1] + "'", n);
    e.kind = *kind;
    e.app = f[2];
    e.task = f[3];
    e.peer = f[4];
    if (!f[5].empty()) e.tile = parse_coord(f[5], n);
    if (!f[6].empty()) {
      e.tile_kind = parse_tile_kind(f[6]);
      if (!e.tile_kind) throw ParseError("unknown tile kind '" + f[6] + "'", n);
    }
    e.instructions = parse_number<std::uint64_t>(f[7], n);
    e.volume = parse_number<std::uint64_t>(f[8], n);
    e.hops = parse_number<std::uint64_t>(f[9], n);
    e.cluster = parse_number<int>(f[10], n);
    if (!f[11].empty()) {
      for (const auto& c : split(f[11], '>')) e.path.push_back(parse_coord(c, n));
    }
    events.push_back(std::move(e));
  }
  return events;
}

void write_event_log(const std::vector<EventRecord>& events, const std::filesystem::path& path) {
  write_file(path, format_event_log(events));
}

// --- layout ------------------------------------------------------------------------

ArchGraph parse_layout(std::string_view text) {
  std::vector<TileKind> kinds;
  int width = -1;
  int height = 0;
  std::size_t line_no = 0;
  for (std::string_view line : lines_of(text)) {
    ++line_no;
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (width >= 0 && static_cast<int>(line.size()) != width) {
      throw ParseError("layout rows differ in length", line_no);
    }
    width = static_cast<int>(line.size());
    for (char ch : line) {
      switch (ch) {
        case 'M': kinds.push_back(TileKind::Manager); break;
        case 'I': kinds.push_back(TileKind::ISP); break;
        case 'R': kinds.push_back(TileKind::RA); break;
        default: throw ParseError(std::string("unknown tile symbol '") + ch + "'", line_no);
      }
    }
    ++height;
  }
  if (width <= 0) throw ParseError("layout is empty", 0);
  return ArchGraph(width, height, std::move(kinds));
}

ArchGraph load_layout(const std::filesystem::path& path) { return parse_layout(read_file(path)); }

}  // namespace nocmap
