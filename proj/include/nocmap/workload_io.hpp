#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nocmap/simulator.hpp"
#include "nocmap/task_graph.hpp"

namespace nocmap {

// --- workload XML ---------------------------------------------------------------

/// Parses and validates a `<workload version="1">` document.
/// Throws ParseError (with line number) for malformed XML or schema violations and
/// ValidationError for structurally invalid graphs.
[[nodiscard]] std::vector<TaskGraph> parse_workload(std::string_view text);
[[nodiscard]] std::vector<TaskGraph> load_workload(const std::filesystem::path& path);

/// Canonical serialization: UTF-8, LF line endings, two-space indentation.
[[nodiscard]] std::string serialize_workload(const std::vector<TaskGraph>& apps);
void save_workload(const std::filesystem::path& path, const std::vector<TaskGraph>& apps);

// --- generation -----------------------------------------------------------------

struct GenConfig {
  std::size_t app_count = 1;
  std::size_t min_tasks = 7;
  std::size_t max_tasks = 9;
  double hw_task_probability = 14.0 / 63.0;
  std::uint64_t vms = 100;
  std::uint64_t vsm = 100;
  std::uint64_t instructions = 100;
  std::uint64_t seed = 0;

  /// Throws InputError for empty ranges or a probability outside [0, 1].
  void validate() const;
};

/// Random tree-shaped applications: task 0 is Initial, every later task gets one master
/// drawn uniformly from the earlier tasks. Fully determined by cfg (including the seed).
[[nodiscard]] std::vector<TaskGraph> generate_workload(const GenConfig& cfg);

// --- reports --------------------------------------------------------------------

/// One CSV row of a comparison report.
struct ReportRow {
  std::string heuristic;
  std::uint64_t seed = 0;
  std::size_t app_count = 0;
  std::uint64_t makespan_cycles = 0;
  std::uint64_t total_energy = 0;
  std::uint64_t energy_compute = 0;
  std::uint64_t energy_comm = 0;
  std::uint64_t peak_link_load = 0;
  double avg_link_load = 0.0;
  std::uint64_t mapping_evaluations = 0;
  std::uint64_t max_queue_wait = 0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

[[nodiscard]] ReportRow to_row(const SimReport& report);

inline constexpr std::string_view kReportHeader =
    "heuristic,seed,app_count,makespan_cycles,total_energy,energy_compute,energy_comm,"
    "peak_link_load,avg_link_load,mapping_evaluations,max_queue_wait";

/// Rows sorted by (heuristic, seed); doubles use the shortest round-trip form.
[[nodiscard]] std::string format_report(std::vector<ReportRow> rows);
[[nodiscard]] std::vector<ReportRow> parse_report(std::string_view text);
/// Throws InputError for an empty row set and IoError if the file cannot be written.
void write_report(const std::vector<ReportRow>& rows, const std::filesystem::path& path);

// --- event log ------------------------------------------------------------------

inline constexpr std::string_view kEventLogHeader =
    "cycle,event,app,task,peer,tile,tile_kind,instructions,volume,hops,cluster,path";

[[nodiscard]] std::string format_event_log(const std::vector<EventRecord>& events);
[[nodiscard]] std::vector<EventRecord> parse_event_log(std::string_view text);
void write_event_log(const std::vector<EventRecord>& events, const std::filesystem::path& path);

// --- platform layout ---------------------------------------------------------------

/// One text row per mesh row: 'M' manager, 'I' ISP, 'R' RA. Blank lines and lines
/// starting with '#' are ignored.
[[nodiscard]] ArchGraph parse_layout(std::string_view text);
[[nodiscard]] ArchGraph load_layout(const std::filesystem::path& path);

// --- helpers ----------------------------------------------------------------------

[[nodiscard]] std::string read_file(const std::filesystem::path& path);
/// Writes bytes verbatim (binary mode). Throws IoError on failure.
void write_file(const std::filesystem::path& path, std::string_view bytes);
[[nodiscard]] std::string format_double(double value);

}  // namespace nocmap
