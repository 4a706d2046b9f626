#include "bfflab/witness.hpp"

#include <functional>

#include "bfflab/errors.hpp"
#include "bfflab/eval.hpp"

namespace bfflab {

namespace {

using namespace term;

TermPtr exp2_len(TermPtr w) { return comp(smash(), {lit(1), std::move(w)}); }

/// Term w with |w| equal to the value of `p`, given witnesses for its
/// |f_j|(.) sub-polynomials.
TermPtr length_witness(const SopPtr& p, const std::vector<SopPtr>& nodes, std::size_t numbers) {
  switch (p->kind) {
    case SopKind::Const:
      return p->value == 0 ? lit(0) : lit(pow2(to_u64(p->value) - 1));
    case SopKind::LenVar: return arg(p->index);
    case SopKind::Plus:
      return call(Builtin::Half,
                  {call(Builtin::Mul, {exp2_len(length_witness(p->lhs, nodes, numbers)),
                                       exp2_len(length_witness(p->rhs, nodes, numbers))})});
    case SopKind::Times:
      return call(Builtin::Half, {comp(smash(), {length_witness(p->lhs, nodes, numbers),
                                                 length_witness(p->rhs, nodes, numbers)})});
    case SopKind::NormApp:
      for (std::size_t m = 0; m < nodes.size(); ++m)
        if (same_sop(nodes[m], p)) return apply(p->index, arg(numbers + m));
      break;
  }
  throw NotRegular();
}

TermPtr all_below(const SopPtr& p, const std::vector<SopPtr>& nodes, std::size_t numbers) {
  return call(Builtin::Monus, {exp2_len(length_witness(p, nodes, numbers)), lit(1)});
}

}  // namespace

WitnessTerms witness_terms(const SopPtr& p, std::size_t numbers) {
  if (!is_regular(p)) throw NotRegular();
  WitnessTerms w;
  w.numbers = std::max(numbers, len_var_count(p));
  w.functions = function_count(p);
  w.nodes = norm_applications(p);
  for (const auto& n : w.nodes) w.terms.push_back(all_below(n->lhs, w.nodes, w.numbers));
  w.terms.push_back(all_below(p, w.nodes, w.numbers));
  return w;
}

WitnessReport witness_check(const SopPtr& p, const WitnessTerms& w,
                            std::span<const Oracle> functions, std::span<const Nat> xs,
                            const Nat& u_lo, const Nat& u_hi, std::uint64_t cap,
                            NormMethod method) {
  WitnessReport report;
  std::vector<const Oracle*> fs;
  for (const auto& f : functions) fs.push_back(&f);
  report.p_value = sop_eval(p, SopEnv::from_args(xs, fs, method));

  std::vector<Oracle> oracles(functions.begin(), functions.end());
  EvalOptions opt;
  opt.log_queries = false;
  CostLedger ledger;
  std::vector<Nat> args(xs.begin(), xs.end());
  const std::size_t n = w.terms.size() - 1;
  bool have_max = false;

  std::function<bool(std::size_t)> dfs = [&](std::size_t level) -> bool {
    if (level == n) {
      if (++report.tuples > cap) throw SearchSpaceTooLarge(std::to_string(report.tuples), cap);
      Nat v = eval(w.terms[n], oracles, args, ledger, opt);
      if (!have_max || v > report.rhs_max) report.rhs_max = v;
      have_max = true;
      return report.rhs_max >= u_hi;
    }
    Nat bound = eval(w.terms[level], oracles, args, ledger, opt);
    if (bound >= cap) throw SearchSpaceTooLarge(to_string(bound + 1), cap);
    const unsigned long top = bound.get_ui();
    for (unsigned long z = 0; z <= top; ++z) {
      args.emplace_back(z);
      const bool done = dfs(level + 1);
      args.pop_back();
      if (done) return true;
    }
    return false;
  };
  dfs(0);

  for (Nat u = u_lo; u <= u_hi; ++u) {
    const bool lhs = bit_length(u) <= report.p_value;
    const bool rhs = have_max && u <= report.rhs_max;
    if (lhs != rhs) report.disagreements.push_back({u, lhs, rhs});
  }
  return report;
}

}  // namespace bfflab
