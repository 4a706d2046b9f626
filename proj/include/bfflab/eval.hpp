#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "bfflab/nat.hpp"
#include "bfflab/oracle.hpp"
#include "bfflab/term.hpp"

namespace bfflab {

/// Counters accumulated over one or more evaluations. Every field only grows.
struct CostLedger {
  std::uint64_t builtin_steps = 0;
  std::uint64_t oracle_queries = 0;
  /// Sum of |f(z)| over all queries (length-cost convention).
  Nat kc_oracle_cost = 0;
  std::uint64_t peak_value_bits = 0;
  std::uint64_t recursion_unfoldings = 0;

  friend bool operator==(const CostLedger&, const CostLedger&) = default;
};

/// One step of a bounded recursion, reported to `EvalOptions::on_recursion`.
struct RecursionEvent {
  const Term* node = nullptr;
  Nat y;
  Nat raw;    // value before the bound is applied
  Nat value;  // value returned
  Nat bound;  // value of K at this y
};

struct EvalOptions {
  std::uint64_t fuel = std::uint64_t{1} << 32;
  /// Error instead of clamping when a recursion value exceeds K*.
  bool strict = false;
  /// Append oracle queries to the oracles' logs.
  bool log_queries = true;
  std::uint64_t max_value_bits = std::uint64_t{1} << 22;
  std::function<void(const RecursionEvent&)> on_recursion;
};

/// Applies a builtin or basis function to explicit arguments. The argument
/// count must equal the arity.
Nat eval_builtin(Builtin op, std::span<const Nat> args);
Nat eval_builtin(std::string_view name, std::span<const Nat> args);

/// K* = (1 # K) monus 1 = 2^|K| - 1.
Nat kstar(const Nat& k);

/// Evaluates `t` at the given oracles and numbers. The term is expected to
/// have passed `validate_term` at rank (oracles.size(), args.size()).
///
/// Limited recursion clamps each recursion value to K* of the bound term at
/// that point, so |F(y)| <= |K(y)| always holds; in strict mode a clamp that
/// changes the value throws BoundViolation instead. Throws FuelExhausted when
/// the fuel runs out and ValueTooLarge past `max_value_bits`.
Nat eval(const TermPtr& t, std::span<Oracle> oracles, std::span<const Nat> args,
         CostLedger& ledger, const EvalOptions& options = {});

/// Convenience overload with a private ledger.
Nat eval(const TermPtr& t, std::span<Oracle> oracles, std::span<const Nat> args);

}  // namespace bfflab
