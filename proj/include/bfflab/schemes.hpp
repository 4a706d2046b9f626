#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bfflab/eval.hpp"
#include "bfflab/nat.hpp"
#include "bfflab/oracle.hpp"
#include "bfflab/sexpr.hpp"
#include "bfflab/sop.hpp"
#include "bfflab/term.hpp"

namespace bfflab {

/// SqBd(a, b) = (2b + 1) # (4(2a + 1)^2).
Nat sqbd(const Nat& a, const Nat& b);

/// A finite sequence packed into one natural. Each element occupies a block
/// of `width` bits: a marker bit 1 followed by the element in width - 1
/// bits. The first element sits in the most significant block.
struct SequenceCode {
  std::size_t width = 2;
  Nat payload = 0;
  std::size_t length = 0;

  friend bool operator==(const SequenceCode&, const SequenceCode&) = default;
};

namespace seq {
/// Width |a| + 2, enough for any element <= a.
std::size_t width_for(const Nat& a);
SequenceCode empty(std::size_t width);
/// Encodes with width |a| + 2. Throws ElementTooWide for elements > a that
/// do not fit.
SequenceCode encode(std::span<const Nat> elements, const Nat& a);
SequenceCode encode_width(std::span<const Nat> elements, std::size_t width);
std::vector<Nat> decode(const SequenceCode& c);
/// (c)_i. Throws IndexOutOfRange.
Nat get(const SequenceCode& c, std::size_t i);
/// c extended at the end with v. Throws ElementTooWide.
SequenceCode append(const SequenceCode& c, const Nat& v);
/// The same elements re-encoded at a width >= the current one.
SequenceCode widen(const SequenceCode& c, std::size_t width);
}  // namespace seq

enum class BoundMode { Clamp, Strict };

/// n simultaneous recursions on notation over u with parameters alpha:
///
///   F_i(0)  = G_i(alpha)
///   F_i(u)  = H_i(u, F_1(u/2), ..., F_n(u/2), alpha)
///   F_i(u) <= K_i(u, alpha, F_1(u), ..., F_{i-1}(u))
///
/// given as host-level callbacks, so constructions can be nested.
struct MlrnCallbacks {
  std::size_t n = 0;
  std::function<Nat(std::size_t i, const std::vector<Nat>& alpha)> g;
  std::function<Nat(std::size_t i, const Nat& u, const std::vector<Nat>& prev,
                    const std::vector<Nat>& alpha)>
      h;
  std::function<Nat(std::size_t i, const Nat& u, const std::vector<Nat>& alpha,
                    const std::vector<Nat>& current)>
      k;
};

/// The same system as functional terms. Numbers: G_i(alpha),
/// H_i(u, F_1..F_n, alpha), K_i(u, alpha, F_1..F_{i-1}).
struct MlrnSystem {
  std::vector<TermPtr> g, h, k;
  std::size_t size() const { return g.size(); }
};

/// Evaluates (F_1(u), ..., F_n(u)).
using MlrnEvaluator = std::function<std::vector<Nat>(const Nat& u, const std::vector<Nat>& alpha)>;

/// Eliminates the simultaneous recursion: F_1 is replaced by the code W of
/// its course of values, bounded by S = SqBd(Kbar, u), and the remaining
/// n - 1 functionals are compiled recursively with W as an extra parameter.
/// A single functional is an ordinary bounded recursion. Every bound is
/// applied as a min on the numeric value (clamp) or checked (strict).
MlrnEvaluator compile_mlrn(MlrnCallbacks sys, BoundMode mode = BoundMode::Clamp);

/// Callbacks that evaluate the terms of `sys` against `oracles`.
MlrnCallbacks mlrn_callbacks(const MlrnSystem& sys, std::span<Oracle> oracles,
                             EvalOptions options = {});

/// Khat(u): the prefix u|i maximizing K_1, latest on ties broken as in the
/// construction. Kbar(u) = K_1(Khat(u)).
Nat mlrn_khat(const std::function<Nat(const Nat&)>& k1, const Nat& u);
Nat mlrn_kbar(const std::function<Nat(const Nat&)>& k1, const Nat& u);

/// Bounded recursion on notation with a polynomial bound:
///   F(0) = G(f, x), F(y) = H(f, x, F(y/2), y), |F(y)| <= Q(|f|, |x|, |y|).
/// Q's |x_l| (l = number of x arguments) stands for |y|.
struct PbrnSystem {
  TermPtr g, h;
  SopPtr q;
};

struct SchemeOptions {
  BoundMode mode = BoundMode::Clamp;
  NormMethod norm_method = NormMethod::BruteForce;
  std::size_t norm_cap = default_norm_cap();
  EvalOptions eval;
};

Nat eval_pbrn(const PbrnSystem& sys, std::span<Oracle> oracles, std::span<const Nat> xs,
              const Nat& y, const SchemeOptions& options = {});

/// Successor recursion of polynomial length:
///   F*(0) = G(f, x), F*(y + 1) = H(f, x, F*(y), y), F(f, x) = F*(P).
struct PbrplSystem {
  TermPtr g, h;
  SopPtr p, q;
};

struct PbrplRun {
  Nat value;
  /// Recursion steps taken before the clock fired.
  Nat steps;
  /// P* at the moment the clock fired.
  Nat p_star;
  /// Points queried, per oracle, sorted and without repetitions.
  std::vector<std::vector<Nat>> queried;
};

/// The clocked evaluation: after each step P* is P evaluated with every
/// oracle replaced by its restriction to the points queried so far (0
/// elsewhere), and the recursion stops once u + 1 > P*. |F*| <= Q* is
/// checked with the same substitution. Throws BoundViolation and, past
/// `hard_cap` steps, NonTermination.
PbrplRun eval_pbrpl_clocked(const PbrplSystem& sys, std::span<const Oracle> oracles,
                            std::span<const Nat> xs, std::uint64_t hard_cap = 1u << 16,
                            const EvalOptions& options = {});

/// F*(f, x, y) by plain iteration.
Nat pbrpl_iterate(const PbrplSystem& sys, std::span<const Oracle> oracles,
                  std::span<const Nat> xs, const Nat& y, const EvalOptions& options = {});

struct PbrplSample {
  std::vector<Oracle> oracles;
  std::vector<Nat> xs;
};

struct PbrplViolation {
  std::string condition;  // "bound", "stabilization", "locality"
  std::size_t sample = 0;
  std::size_t other = 0;  // second sample for locality
  Nat y;
  std::string detail;
};

struct PbrplReport {
  std::size_t samples = 0;
  Nat horizon;  // largest horizon used
  std::uint64_t locality_pairs = 0;
  std::vector<PbrplViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Brute-force check of the side conditions on a finite domain: the Q bound
/// for y <= P, stabilization F*(y) = F*(P) for P <= y <= 2P + 4, and
/// locality between samples with equal numbers. Throws SearchSpaceTooLarge
/// when P exceeds `max_p`.
PbrplReport validate_pbrpl(const PbrplSystem& sys, std::span<const PbrplSample> domain,
                           std::uint64_t max_p = 1u << 12);

/// Scheme files:
///   (mlrn :g1 <t> :h1 <t> :k1 <t> :g2 ...)
///   (pbrn :g <t> :h <t> :q <sop>)
///   (pbrpl :g <t> :h <t> :p <sop> :q <sop>)
MlrnSystem parse_mlrn(const SExpr& e);
PbrnSystem parse_pbrn(const SExpr& e);
PbrplSystem parse_pbrpl(const SExpr& e);

}  // namespace bfflab
