#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cubikit/graph.hpp"
#include "cubikit/report.hpp"
#include "cubikit/wallspace.hpp"

namespace cubikit {

struct CriterionOutcome {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string witness;  // deterministic summary of the measured values
  double seconds = 0;   // wall time, kept out of JSON reports
  double time_limit = 0;
};

// Runs the numbered acceptance criteria (all of 1..11 when `which` is empty), in parallel up to
// `threads` workers. Results come back in criterion order. A criterion also fails when it
// overruns its time limit.
std::vector<CriterionOutcome> run_acceptance(std::uint64_t seed, const std::vector<int>& which = {},
                                             int threads = 1);

// Graph-specific smoke checks used by `verify all --graph`.
std::vector<Check> graph_checks(const DefiningGraph& g, std::uint64_t seed);

// Random wallspace on `points` points with at most `max_walls` distinct walls.
Wallspace random_wallspace(std::uint64_t seed, int points, int max_walls);

}  // namespace cubikit
