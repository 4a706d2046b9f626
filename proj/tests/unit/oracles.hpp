#pragma once

// Independent reference implementations on machine words, used to check the
// library against something other than itself.

#include <algorithm>
#include <cstdint>
#include <map>

namespace ref {

inline std::uint64_t len(std::uint64_t x) {
  std::uint64_t n = 0;
  while (x) {
    x /= 2;
    ++n;
  }
  return n;
}

inline std::uint64_t msp(std::uint64_t x, std::uint64_t y) {
  std::uint64_t drop = len(x) > y ? len(x) - y : 0;
  for (std::uint64_t i = 0; i < drop; ++i) x /= 2;
  return x;
}

inline std::uint64_t kstar(std::uint64_t k) {
  std::uint64_t v = 1;
  for (std::uint64_t i = 0; i < len(k); ++i) v *= 2;
  return v - 1;
}

/// Table oracle lookup with default.
inline std::uint64_t lookup(const std::map<std::uint64_t, std::uint64_t>& t, std::uint64_t x,
                            std::uint64_t dflt = 0) {
  auto it = t.find(x);
  return it == t.end() ? dflt : it->second;
}

/// max over y < 2^x of |f(y)|.
inline std::uint64_t norm(const std::map<std::uint64_t, std::uint64_t>& t, std::uint64_t x,
                          std::uint64_t dflt = 0) {
  std::uint64_t best = 0;
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << x); ++y) best = std::max(best, len(lookup(t, y, dflt)));
  return best;
}

}  // namespace ref
