#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bfflab/nat.hpp"
#include "bfflab/oracle.hpp"
#include "bfflab/sexpr.hpp"

namespace bfflab {

enum class SopKind { Const, LenVar, Plus, Times, NormApp };

struct Sop;
using SopPtr = std::shared_ptr<const Sop>;

/// Immutable second-order polynomial: constants, |x_i|, +, * and |f_j|(P).
struct Sop {
  SopKind kind = SopKind::Const;
  Nat value;              // Const
  std::size_t index = 0;  // LenVar: i, NormApp: j
  SopPtr lhs;             // Plus, Times; NormApp argument
  SopPtr rhs;             // Plus, Times
};

namespace sop {
SopPtr constant(const Nat& n);
SopPtr len(std::size_t i);
SopPtr plus(SopPtr p, SopPtr q);
SopPtr times(SopPtr p, SopPtr q);
SopPtr norm(std::size_t j, SopPtr p);
}  // namespace sop

/// Three-way structural comparison; equal iff syntactically identical.
int compare(const Sop& a, const Sop& b);
bool same_sop(const SopPtr& a, const SopPtr& b);

/// Maximal nesting of |f_j|(.) applications.
std::size_t depth(const SopPtr& p);

/// One more than the largest |x_i| index (0 when there are none).
std::size_t len_var_count(const SopPtr& p);
/// One more than the largest function index (0 when there are none).
std::size_t function_count(const SopPtr& p);

/// Sop files: `(c n)`, `(lx i)`, `(+ P Q)`, `(* P Q)`, `(nf j P)`.
SopPtr parse_sop(const SExpr& e);
SopPtr parse_sop(std::string_view text);
SopPtr load_sop(const std::string& path);
std::string format_sop(const SopPtr& p);

/// Brute-force norm |f|(x) = max over |y| <= x of |f(y)|, enumerating the
/// 2^x points y < 2^x. Throws NormCapExceeded when x > cap.
Nat norm(const Oracle& f, const Nat& x, std::size_t cap);

/// The same norm computed from the table: the table entries with |y| <= x,
/// plus the default whenever some y < 2^x lies outside the table. Exact for
/// every x.
Nat table_norm(const Oracle& f, const Nat& x);

/// Default brute-force cap: 20 bits, or BFFLAB_NORM_CAP when set.
std::size_t default_norm_cap();

enum class NormMethod { BruteForce, Table };

/// Evaluation context: |x_i| values and one oracle per function variable.
/// Norm results are memoised per (j, x).
class SopEnv {
 public:
  SopEnv() = default;
  SopEnv(std::vector<Nat> lengths, std::vector<const Oracle*> functions,
         NormMethod method = NormMethod::BruteForce, std::size_t cap = default_norm_cap())
      : lengths_(std::move(lengths)), functions_(std::move(functions)), method_(method),
        cap_(cap) {}

  /// |x_i| := |args[i]|.
  static SopEnv from_args(std::span<const Nat> args, std::vector<const Oracle*> functions,
                          NormMethod method = NormMethod::BruteForce,
                          std::size_t cap = default_norm_cap());

  const std::vector<Nat>& lengths() const { return lengths_; }
  const std::vector<const Oracle*>& functions() const { return functions_; }
  NormMethod method() const { return method_; }
  std::size_t cap() const { return cap_; }

  const Nat& length(std::size_t i) const;
  Nat norm_of(std::size_t j, const Nat& x) const;

 private:
  std::vector<Nat> lengths_;
  std::vector<const Oracle*> functions_;
  NormMethod method_ = NormMethod::BruteForce;
  std::size_t cap_ = 20;
  mutable std::map<std::pair<std::size_t, Nat>, Nat> cache_;
};

Nat sop_eval(const SopPtr& p, const SopEnv& env);

/// Majorizing regular polynomial of the same depth: for each function
/// variable and depth level the distinct arguments are replaced by their
/// sum, bottom-up, plus the argument chosen one level below so that the
/// arguments increase with depth. Levels where a function variable is absent
/// are filled with a zero-weighted application so every (j, m) pair has
/// exactly one representative.
SopPtr regularize(const SopPtr& p);

/// True iff for every function variable j occurring in P and every m in
/// [1, depth(P)] there is exactly one distinct sub-polynomial |f_j|(.) of
/// depth m.
bool is_regular(const SopPtr& p);

/// Distinct |f_j|(.) sub-polynomials, ordered by depth, then function
/// index, then first occurrence in a left-to-right traversal.
std::vector<SopPtr> norm_applications(const SopPtr& p);

/// For regular P: compares the values of the |f_j|(.) arguments level by
/// level and returns the first pair (lower, higher) of depths where the
/// value decreases, or nullopt.
std::optional<std::pair<std::size_t, std::size_t>> chain_violation(const SopPtr& p,
                                                                   const SopEnv& env);

}  // namespace bfflab
