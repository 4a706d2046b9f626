#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bfflab/eval.hpp"
#include "bfflab/oracle.hpp"
#include "bfflab/sop.hpp"
#include "bfflab/term.hpp"

namespace bfflab {

/// Majorizing polynomial B with |t(f, x)| <= B(|f|, |x|), built by the rule
/// table: lengths of the arguments are substituted into the bound of the
/// head of each composition, recursion nodes take the bound of K.
SopPtr infer_bound(const TermPtr& t);

struct Sample {
  std::vector<Oracle> oracles;
  std::vector<Nat> xs;
};

struct MajorizationViolation {
  std::size_t sample = 0;
  Nat value;
  Nat bound;
};

struct MajorizationReport {
  std::size_t checked = 0;
  /// Samples where evaluation or the bound could not be computed.
  std::size_t skipped = 0;
  std::vector<MajorizationViolation> violations;
};

/// Asserts |t(f, x)| <= B(|f|, |x|) on every sample.
MajorizationReport check_majorization(const TermPtr& t, const SopPtr& bound,
                                      std::span<const Sample> samples,
                                      NormMethod method = NormMethod::BruteForce,
                                      const EvalOptions& options = {});

}  // namespace bfflab
