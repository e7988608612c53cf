#include <cstdio>
#include <cstdlib>
#include <string>

#include "pam/acceptance.hpp"

// Runs every acceptance criterion and prints one line per criterion.
int main(int argc, char** argv) {
  pam::AcceptanceOptions opt;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  int failed = 0;
  for (int id : ids.empty() ? std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10} : ids) {
    const auto r = pam::run_criterion(id, opt);
    std::string detail;
    for (const auto& d : r.detail) detail += " " + d;
    std::printf("[%s] criterion %2d: %s (%.1fs / %.0fs budget)%s\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.budget_seconds, detail.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, ids.empty() ? std::size_t{10} : ids.size());
  return failed == 0 ? 0 : 1;
}
