#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bfflab/nat.hpp"
#include "bfflab/oracle.hpp"
#include "bfflab/sop.hpp"
#include "bfflab/term.hpp"

namespace bfflab {

/// Bounded-existential characterization of a regular polynomial P:
///
///   |u| <= P  iff  exists z_1 <= t_0, ..., z_n <= t_{n-1} with u <= t_n
///
/// There is one witness z_m per distinct |f_j|(R) sub-polynomial, listed in
/// `nodes` by depth. Term t_{m-1} reads the numbers x_0..x_{l-1} followed by
/// z_1..z_{m-1} as `(x i)` arguments; t_n reads all of them.
struct WitnessTerms {
  std::vector<TermPtr> terms;
  std::vector<SopPtr> nodes;
  std::size_t numbers = 0;
  std::size_t functions = 0;
};

/// Builds the witness terms over Ap, +, *, #, half, monus and literals.
/// `numbers` defaults to the number of |x_i| variables in P. Throws
/// NotRegular.
WitnessTerms witness_terms(const SopPtr& p, std::size_t numbers = 0);

struct WitnessDisagreement {
  Nat u;
  bool lhs = false;
  bool rhs = false;
};

struct WitnessReport {
  Nat p_value;
  /// Largest t_n over the witness tuples visited (enumeration stops early
  /// once it reaches the top of the u range).
  Nat rhs_max;
  std::uint64_t tuples = 0;
  std::vector<WitnessDisagreement> disagreements;
};

/// Brute-force check of the biconditional for every u in [u_lo, u_hi]. The
/// left side is sop_eval(P) with the given norm method; the right side
/// enumerates witness tuples within the term bounds. Throws
/// SearchSpaceTooLarge once more than `cap` tuples would be needed.
WitnessReport witness_check(const SopPtr& p, const WitnessTerms& w,
                            std::span<const Oracle> functions, std::span<const Nat> xs,
                            const Nat& u_lo, const Nat& u_hi, std::uint64_t cap = 1u << 20,
                            NormMethod method = NormMethod::Table);

}  // namespace bfflab
