#include "bfflab/bounds.hpp"

#include "bfflab/errors.hpp"

namespace bfflab {

namespace {

using namespace sop;

SopPtr one_more(SopPtr p) { return plus(std::move(p), constant(1)); }

SopPtr substitute(const SopPtr& p, const std::vector<SopPtr>& args) {
  switch (p->kind) {
    case SopKind::Const: return p;
    case SopKind::LenVar:
      if (p->index >= args.size())
        throw RankError("bound refers to |x" + std::to_string(p->index) + "|");
      return args[p->index];
    case SopKind::Plus: return plus(substitute(p->lhs, args), substitute(p->rhs, args));
    case SopKind::Times: return times(substitute(p->lhs, args), substitute(p->rhs, args));
    case SopKind::NormApp: return norm(p->index, substitute(p->lhs, args));
  }
  return p;
}

SopPtr builtin_bound(Builtin op) {
  switch (op) {
    case Builtin::Add: return one_more(plus(len(0), len(1)));
    case Builtin::Mul: return plus(len(0), len(1));
    case Builtin::CondLE: return plus(len(2), len(3));
    default: return len(0);
  }
}

}  // namespace

SopPtr infer_bound(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Zero: return constant(0);
    case TermKind::SuccZero:
    case TermKind::SuccOne: return one_more(len(0));
    case TermKind::Proj: return len(t->b - 1);
    case TermKind::Smash: return one_more(times(len(0), len(1)));
    case TermKind::Ap: return norm(t->a, len(0));
    case TermKind::Builtin: return builtin_bound(t->op);
    case TermKind::Arg: return len(t->a);
    case TermKind::Lit: return constant(static_cast<unsigned long>(bit_length(t->literal)));
    case TermKind::Comp: {
      std::vector<SopPtr> args;
      for (std::size_t i = 1; i < t->children.size(); ++i)
        args.push_back(infer_bound(t->children[i]));
      return substitute(infer_bound(t->children[0]), args);
    }
    case TermKind::Expand: return infer_bound(t->children[0]);
    case TermKind::Lrn:
    case TermKind::Lrn1: return infer_bound(t->children.back());
  }
  return constant(0);
}

MajorizationReport check_majorization(const TermPtr& t, const SopPtr& bound,
                                      std::span<const Sample> samples, NormMethod method,
                                      const EvalOptions& options) {
  MajorizationReport report;
  EvalOptions opt = options;
  opt.log_queries = false;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    std::vector<Oracle> oracles = samples[s].oracles;
    std::vector<const Oracle*> fs;
    for (const auto& f : samples[s].oracles) fs.push_back(&f);
    Nat value, b;
    try {
      CostLedger ledger;
      value = eval(t, oracles, samples[s].xs, ledger, opt);
      b = sop_eval(bound, SopEnv::from_args(samples[s].xs, fs, method));
    } catch (const NormCapExceeded&) {
      ++report.skipped;
      continue;
    } catch (const ValueTooLarge&) {
      ++report.skipped;
      continue;
    } catch (const FuelExhausted&) {
      ++report.skipped;
      continue;
    }
    ++report.checked;
    if (bit_length(value) > b) report.violations.push_back({s, value, b});
  }
  return report;
}

}  // namespace bfflab
