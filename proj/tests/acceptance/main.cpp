#include <cstdio>
#include <cstdlib>
#include <string>

#include "bfflab/selftest.hpp"

// Usage: acceptance_tests [criterion...]
int main(int argc, char** argv) {
  using namespace bfflab::selftest;
  Options options;
  std::vector<Outcome> outcomes;
  if (argc > 1) {
    for (int i = 1; i < argc; ++i) outcomes.push_back(run_criterion(std::atoi(argv[i]), options));
  } else {
    for (int id = 1; id <= kCriteria; ++id) {
      outcomes.push_back(run_criterion(id, options));
      std::printf("%s\n", format_outcome(outcomes.back()).c_str());
      std::fflush(stdout);
    }
  }
  int failed = 0;
  for (const auto& o : outcomes) {
    if (argc > 1) std::printf("%s\n", format_outcome(o).c_str());
    if (!o.passed) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(outcomes.size()) - failed, outcomes.size());
  return failed == 0 ? 0 : 1;
}
