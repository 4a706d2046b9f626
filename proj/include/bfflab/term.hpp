#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "bfflab/nat.hpp"
#include "bfflab/sexpr.hpp"

namespace bfflab {

/// Rank (k, l) of a type-2 functional: k function arguments, l number
/// arguments.
struct Rank {
  std::size_t functions = 0;
  std::size_t numbers = 0;
  friend bool operator==(const Rank&, const Rank&) = default;
};

std::string to_string(const Rank& r);

enum class TermKind {
  Zero,      // o(x) = 0
  SuccZero,  // s0(x) = 2x
  SuccOne,   // s1(x) = 2x + 1
  Proj,      // i^n_k
  Smash,     // x # y
  Ap,        // Ap(f_j, x) = f_j(x)
  Builtin,   // trusted extended basis
  Arg,       // number argument i of the enclosing context
  Lit,       // natural constant in any context
  Comp,      // h(g_1, ..., g_m)
  Expand,    // ignore trailing function/number arguments
  Lrn,       // limited recursion on notation, two step functions
  Lrn1,      // limited recursion on notation, single step function
};

enum class Builtin { Add, Mul, Len, Half, Msp, Monus, Min, CondLE };

std::string_view builtin_name(Builtin b);
std::size_t builtin_arity(Builtin b);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Immutable node of a functional term.
///
/// Basis and builtin nodes have fixed number arity; they ignore function
/// arguments and so are accepted at any function arity. `Ap(j)` needs at
/// least j + 1 functions and exactly one number. `Arg` and `Lit` adapt to the
/// rank of their context.
struct Term {
  TermKind kind = TermKind::Zero;
  Builtin op = Builtin::Add;
  /// Proj: (n, k) with 1 <= k <= n. Ap: j. Arg: i. Expand: (added functions,
  /// added numbers).
  std::size_t a = 0;
  std::size_t b = 0;
  Nat literal;
  /// Comp: h, g_1..g_m. Expand: inner. Lrn: G, H1, H2, K. Lrn1: G, H, K.
  std::vector<TermPtr> children;
};

namespace term {
TermPtr zero();
TermPtr s0();
TermPtr s1();
TermPtr proj(std::size_t n, std::size_t k);
TermPtr smash();
TermPtr ap(std::size_t j);
TermPtr builtin(Builtin op);
TermPtr arg(std::size_t i);
TermPtr lit(const Nat& n);
TermPtr comp(TermPtr h, std::vector<TermPtr> gs);
TermPtr expand(TermPtr inner, std::size_t added_functions, std::size_t added_numbers);
TermPtr lrn(TermPtr g, TermPtr h1, TermPtr h2, TermPtr k);
TermPtr lrn1(TermPtr g, TermPtr h, TermPtr k);

/// Ap(f_j, t) as a composition.
TermPtr apply(std::size_t j, TermPtr t);
/// Builtin applied to argument terms.
TermPtr call(Builtin op, std::vector<TermPtr> args);
}  // namespace term

/// One problem found by `validate_term`. `path` lists child indices from
/// the root, rendered like "/0/2".
struct RankIssue {
  enum class Kind { RankMismatch, UnknownOracleIndex };
  Kind kind = Kind::RankMismatch;
  std::string path;
  std::string found;
  std::string expected;

  std::string message() const;
};

/// Checks every node against the rank its context requires, with `expected`
/// at the root. Empty result means ok.
std::vector<RankIssue> validate_term(const TermPtr& t, Rank expected);

/// Smallest rank the term can be used at.
Rank rank(const TermPtr& t);

/// Parses the s-expression term language:
///   atoms  o s0 s1 add mul len half msp monus min condle smash
///   (proj n k) (ap j <t>) (ap j) (comp <h> <g>...) (expand <t> k l)
///   (lrn :g <t> :h1 <t> :h2 <t> :k <t>) (lrn1 :g <t> :h <t> :k <t>)
///   (x i) and decimal literals.
TermPtr parse_term(const SExpr& e);
TermPtr parse_term(std::string_view text);
TermPtr load_term(const std::string& path);

std::string format_term(const TermPtr& t);

/// Number of nodes.
std::size_t term_size(const TermPtr& t);

/// Maximal nesting of oracle applications along any root-to-leaf path.
std::size_t ap_nesting(const TermPtr& t);

}  // namespace bfflab
