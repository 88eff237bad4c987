#pragma once

// Independent reference computations used by the test suites and `nocmap verify`.
// Nothing here calls the heuristic or Dijkstra code paths it is meant to check.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nocmap/heuristics.hpp"
#include "nocmap/simulator.hpp"

namespace nocmap::oracle {

/// Routing as the oracle sees it: own XY walk, or exhaustive enumeration for min-load.
[[nodiscard]] Path reference_route(RoutePolicy policy, const ArchGraph& arch, Coord src,
                                   Coord dst, const ChannelLoadLedger& ledger);

/// Brute-force placement over every free compatible tile with objectives recomputed
/// from raw link loads. Supports PL, MMC, MAC, BN, NN, Spiral.
[[nodiscard]] std::optional<Coord> brute_force_place(HeuristicKind kind, const MapRequest& req,
                                                     const MappingState& state,
                                                     RoutePolicy policy);

/// Ledger with every directed link load drawn uniformly from [0, max_load].
[[nodiscard]] ChannelLoadLedger random_ledger(const ArchGraph& arch, std::mt19937_64& rng,
                                              std::uint64_t max_load);

struct RandomCase {
  MappingState state;
  MapRequest request;
};

/// Partially occupied platform with traffic from randomly routed fake communications,
/// plus a request from one of the occupied tiles.
[[nodiscard]] RandomCase random_case(const ArchGraph& arch, std::mt19937_64& rng);

struct EnergyBreakdown {
  std::uint64_t compute = 0;
  std::uint64_t comm = 0;
  [[nodiscard]] std::uint64_t total() const { return compute + comm; }
};

/// Energy recomputed from compute_end and comm_end rows of an event log.
[[nodiscard]] EnergyBreakdown recompute_energy(const std::vector<EventRecord>& events,
                                               const PlatformParams& params);

/// Most cluster slots held at once according to app_admit / app_done rows.
[[nodiscard]] std::size_t max_clusters_from_log(const std::vector<EventRecord>& events);

/// Longest Initial-to-leaf chain of compute times on the fastest compatible tile kinds
/// plus the minimum one-hop transfer time of each forward edge.
[[nodiscard]] std::uint64_t critical_path_lower_bound(const TaskGraph& graph,
                                                      const PlatformParams& params);

// --- verify suites -------------------------------------------------------------

struct SuiteResult {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  /// Dump of the first mismatch, empty when everything passed.
  std::string counterexample;
  [[nodiscard]] bool passed() const { return failures == 0; }
};

/// Min-load router against exhaustive enumeration on 2x2, 3x3 and 4x4 meshes,
/// `ledgers` random ledgers (loads 0..500) per size, every source/destination pair.
[[nodiscard]] SuiteResult verify_routing(std::uint64_t seed, std::size_t ledgers = 100);

/// PL, MMC and MAC (and BN, NN, Spiral) against brute-force enumeration on a 4x4 mesh,
/// `states` random states per heuristic and route policy.
[[nodiscard]] SuiteResult verify_placement(std::uint64_t seed, std::size_t states = 100);

/// Spiral rings around every center of the 8x8 mesh enumerate each other tile once.
[[nodiscard]] SuiteResult verify_spiral();

/// First-free round-robin on scripted request/release schedules.
[[nodiscard]] SuiteResult verify_first_free();

[[nodiscard]] std::vector<std::string> suite_names();
/// Throws InputError for an unknown suite name.
[[nodiscard]] SuiteResult run_suite(const std::string& name, std::uint64_t seed);

}  // namespace nocmap::oracle
