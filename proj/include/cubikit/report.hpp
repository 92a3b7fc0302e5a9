#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace cubikit {

struct Check {
  std::string name;
  bool pass = true;
  std::string witness;
};

// Plain JSON report: {"command", "seed", "checks":[{name, status, witness}], "result"}.
// Field order is fixed so equal inputs give byte-identical output.
struct Report {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  nlohmann::ordered_json result = nlohmann::ordered_json::object();

  void add(std::string name, bool pass, std::string witness = "");
  bool ok() const;
  std::string to_json() const;
};

// Worker count from CUBIKIT_THREADS, falling back to the hardware count; at least 1.
int thread_budget();

}  // namespace cubikit
