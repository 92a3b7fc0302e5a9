#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "cubikit/acceptance.hpp"

// Prints one PASS/FAIL line per criterion and exits nonzero on any failure.
int main(int argc, char** argv) {
  std::uint64_t seed = 1;
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--seed" && i + 1 < argc) {
      seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (a == "--only" && i + 1 < argc) {
      which.push_back(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: acceptance [--seed N] [--only K]...\n");
      return 2;
    }
  }
  auto results = cubikit::run_acceptance(seed, which, cubikit::thread_budget());
  bool all = true;
  for (const auto& r : results) {
    std::printf("%s criterion %d: %s (%.2fs) -- %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                r.witness.c_str());
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
