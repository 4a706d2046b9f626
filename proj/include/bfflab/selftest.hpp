#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bfflab::selftest {

struct Options {
  /// Directory holding machines/*.otm and their frozen *.sop bounds.
  std::string fixtures;
  std::uint64_t seed = 0x5eed;
};

/// Compiled-in fixture directory.
std::string default_fixtures();

struct Outcome {
  int id = 0;
  std::string name;
  bool passed = false;
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
  std::string detail;
  double seconds = 0;
  double limit = 0;
};

inline constexpr int kCriteria = 8;

/// Runs one acceptance criterion (1..8). Exceeding the time limit fails it.
Outcome run_criterion(int id, const Options& options = {});
std::vector<Outcome> run_all(const Options& options = {});

/// "PASS  3 mlrn-construction  checks=... violations=0  time=1.2s/60s  detail"
std::string format_outcome(const Outcome& o);

}  // namespace bfflab::selftest
