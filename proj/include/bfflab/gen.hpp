#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bfflab/nat.hpp"
#include "bfflab/oracle.hpp"
#include "bfflab/sop.hpp"
#include "bfflab/term.hpp"

namespace bfflab::gen {

using Rng = std::mt19937_64;

std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi);
bool chance(Rng& rng, double p);

/// Table on [lo, hi] with values in [0, max_value] and the given default.
Oracle table_oracle(Rng& rng, std::uint64_t lo, std::uint64_t hi, std::uint64_t max_value,
                    std::uint64_t default_value = 0);

/// The `index`-th of the (max_value + 1)^(hi - lo + 1) tables on [lo, hi]
/// (default 0), in lexicographic order of the value vector.
Oracle nth_table(std::uint64_t index, std::uint64_t lo, std::uint64_t hi,
                 std::uint64_t max_value);

struct TermShape {
  std::size_t depth = 4;
  std::uint64_t max_literal = 7;
};

/// Random term that validates at `rank`, built from every basis function,
/// builtin and combinator.
TermPtr random_term(Rng& rng, Rank rank, const TermShape& shape = {});

struct SopShape {
  std::size_t depth = 2;
  std::uint64_t max_const = 4;
  std::size_t numbers = 2;
  std::size_t functions = 1;
  /// Upper bound on the number of +/* nodes at each level.
  std::size_t max_ops = 2;
};

SopPtr random_sop(Rng& rng, const SopShape& shape);

}  // namespace bfflab::gen
