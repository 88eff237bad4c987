#include "nocmap/heuristics.hpp"

namespace nocmap::kernels {

CandidateScore score_candidate(Objective objective, const MapRequest& req,
                               const MappingState& state, RoutePolicy policy, Coord candidate) {
  const ArchGraph& arch = state.arch();
  const Coord requester = *req.requester;
  const std::size_t index = arch.linear_index(candidate);

  if (objective == Objective::PathLoad) {
    const Path there = route(policy, arch, requester, candidate, state.ledger());
    const Path back = route(policy, arch, candidate, requester, state.ledger());
    return CandidateScore{path_cost(there, state.ledger()) + path_cost(back, state.ledger()),
                          (there.size() - 1) + (back.size() - 1), index};
  }

  ChannelLoadLedger trial = state.ledger();
  commit_request_routes(trial, arch, policy, requester, candidate, req.vms, req.vsm);
  if (objective == Objective::PeakLoad) {
    return CandidateScore{trial.peak(), trial.total(), index};
  }
  return CandidateScore{trial.total(), trial.peak(), index};
}

std::vector<CandidateScore> score_candidates_serial(Objective objective, const MapRequest& req,
                                                    const MappingState& state,
                                                    RoutePolicy policy,
                                                    std::span<const Coord> candidates) {
  std::vector<CandidateScore> scores;
  scores.reserve(candidates.size());
  for (Coord c : candidates) scores.push_back(score_candidate(objective, req, state, policy, c));
  return scores;
}

std::vector<CandidateScore> score_candidates_parallel(Objective objective, const MapRequest& req,
                                                      const MappingState& state,
                                                      RoutePolicy policy,
                                                      std::span<const Coord> candidates) {
  std::vector<CandidateScore> scores(candidates.size());
  const auto n = static_cast<std::ptrdiff_t>(candidates.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    scores[static_cast<std::size_t>(i)] =
        score_candidate(objective, req, state, policy, candidates[static_cast<std::size_t>(i)]);
  }
  return scores;
}

}  // namespace nocmap::kernels
