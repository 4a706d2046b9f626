#include "bfflab/eval.hpp"

#include <algorithm>
#include <vector>

#include "bfflab/errors.hpp"

namespace bfflab {

namespace {

Nat apply_builtin(Builtin op, std::span<const Nat> a, std::uint64_t max_bits) {
  switch (op) {
    case Builtin::Add: return a[0] + a[1];
    case Builtin::Mul: {
      if (bit_length(a[0]) + bit_length(a[1]) > max_bits)
        throw ValueTooLarge(bit_length(a[0]) + bit_length(a[1]));
      return a[0] * a[1];
    }
    case Builtin::Len: return Nat(static_cast<unsigned long>(bit_length(a[0])));
    case Builtin::Half: return Nat(a[0] >> 1);
    case Builtin::Msp: return msp(a[0], a[1]);
    case Builtin::Monus: return monus(a[0], a[1]);
    case Builtin::Min: return std::min(a[0], a[1]);
    case Builtin::CondLE: return a[0] <= a[1] ? a[2] : a[3];
  }
  return 0;
}

class Evaluator {
 public:
  Evaluator(std::span<Oracle> oracles, CostLedger& ledger, const EvalOptions& options)
      : oracles_(oracles), ledger_(ledger), opt_(options), fuel_(options.fuel) {}

  Nat run(const Term& t, std::span<const Nat> xs) {
    Nat v = eval(t, oracles_.size(), xs);
    return v;
  }

 private:
  void burn() {
    if (fuel_ == 0) throw FuelExhausted();
    --fuel_;
  }

  const Nat& note(const Nat& v) {
    const std::uint64_t bits = bit_length(v);
    if (bits > opt_.max_value_bits) throw ValueTooLarge(bits);
    ledger_.peak_value_bits = std::max(ledger_.peak_value_bits, bits);
    return v;
  }

  Nat basis(Nat v) {
    burn();
    ++ledger_.builtin_steps;
    note(v);
    return v;
  }

  const Nat& arg(std::span<const Nat> xs, std::size_t i) {
    if (i >= xs.size()) throw RankError("number argument " + std::to_string(i) + " not supplied");
    return xs[i];
  }

  /// `k` is the number of function arguments visible at this node.
  Nat eval(const Term& t, std::size_t k, std::span<const Nat> xs) {
    switch (t.kind) {
      case TermKind::Zero: return basis(0);
      case TermKind::SuccZero: return basis(Nat(arg(xs, 0) << 1));
      case TermKind::SuccOne: return basis(Nat((arg(xs, 0) << 1) + 1));
      case TermKind::Proj:
        if (t.b < 1) throw RankError("projection index 0");
        return basis(arg(xs, t.b - 1));
      case TermKind::Smash: {
        burn();
        ++ledger_.builtin_steps;
        return note(smash(arg(xs, 0), arg(xs, 1), opt_.max_value_bits));
      }
      case TermKind::Builtin: {
        const std::size_t n = builtin_arity(t.op);
        if (xs.size() < n) throw RankError(std::string(builtin_name(t.op)) + " needs more arguments");
        burn();
        ++ledger_.builtin_steps;
        return note(apply_builtin(t.op, xs.first(n), opt_.max_value_bits));
      }
      case TermKind::Ap: {
        if (t.a >= k || t.a >= oracles_.size())
          throw RankError("oracle " + std::to_string(t.a) + " not supplied");
        burn();
        Oracle& f = oracles_[t.a];
        const Nat& x = arg(xs, 0);
        Nat v = opt_.log_queries ? f.query(x) : f.peek(x);
        ++ledger_.oracle_queries;
        ledger_.kc_oracle_cost += static_cast<unsigned long>(bit_length(v));
        return note(v);
      }
      case TermKind::Arg: return arg(xs, t.a);
      case TermKind::Lit: return note(t.literal);
      case TermKind::Comp: {
        std::vector<Nat> inner;
        inner.reserve(t.children.size() - 1);
        for (std::size_t i = 1; i < t.children.size(); ++i)
          inner.push_back(eval(*t.children[i], k, xs));
        return eval(*t.children[0], k, inner);
      }
      case TermKind::Expand: {
        if (k < t.a || xs.size() < t.b) throw RankError("expansion exceeds the context rank");
        return eval(*t.children[0], k - t.a, xs.first(xs.size() - t.b));
      }
      case TermKind::Lrn:
      case TermKind::Lrn1: return recurse(t, k, xs);
    }
    return 0;
  }

  /// Recursion on notation over the last number argument, bottom-up along
  /// the prefixes y|0 = 0, y|1, ..., y||y| = y.
  Nat recurse(const Term& t, std::size_t k, std::span<const Nat> xs) {
    if (xs.empty()) throw RankError("recursion needs a recursion argument");
    const bool single = t.kind == TermKind::Lrn1;
    const Term& g = *t.children[0];
    const Term& bound = *t.children.back();
    const Nat& y = xs.back();
    auto params = xs.first(xs.size() - 1);

    std::vector<Nat> buf(params.begin(), params.end());
    buf.resize(params.size() + 2);

    auto clamp = [&](const Nat& v, Nat raw) {
      // buf holds (params, v) for K
      std::span<const Nat> kargs(buf.data(), params.size() + 1);
      buf[params.size()] = v;
      Nat kv = eval(bound, k, kargs);
      Nat cap = kstar(kv);
      Nat out = raw <= cap ? raw : cap;
      if (opt_.strict && raw > cap)
        throw BoundViolation("recursion argument " + to_string(v), to_string(raw),
                             "K* = " + to_string(cap));
      if (opt_.on_recursion) opt_.on_recursion({&t, v, raw, out, kv});
      return out;
    };

    burn();
    ++ledger_.recursion_unfoldings;
    Nat prev = clamp(Nat(0), eval(g, k, params));
    const std::size_t len = bit_length(y);
    for (std::size_t i = 1; i <= len; ++i) {
      burn();
      ++ledger_.recursion_unfoldings;
      Nat v = msp(y, Nat(static_cast<unsigned long>(i)));
      Nat raw;
      if (single) {
        buf[params.size()] = v;
        buf[params.size() + 1] = prev;
        raw = eval(*t.children[1], k, buf);
      } else {
        buf[params.size()] = Nat(v >> 1);
        buf[params.size() + 1] = prev;
        const Term& h = mpz_odd_p(v.get_mpz_t()) ? *t.children[2] : *t.children[1];
        raw = eval(h, k, buf);
      }
      prev = clamp(v, std::move(raw));
      note(prev);
    }
    return prev;
  }

  std::span<Oracle> oracles_;
  CostLedger& ledger_;
  const EvalOptions& opt_;
  std::uint64_t fuel_;
};

}  // namespace

Nat kstar(const Nat& k) { return all_ones(bit_length(k)); }

Nat eval_builtin(Builtin op, std::span<const Nat> args) {
  if (args.size() != builtin_arity(op))
    throw RankError(std::string(builtin_name(op)) + " takes " +
                    std::to_string(builtin_arity(op)) + " arguments");
  return apply_builtin(op, args, kDefaultMaxBits);
}

Nat eval_builtin(std::string_view name, std::span<const Nat> args) {
  auto want = [&](std::size_t n) {
    if (args.size() != n)
      throw RankError(std::string(name) + " takes " + std::to_string(n) + " arguments");
  };
  if (name == "o") return want(1), Nat(0);
  if (name == "s0") return want(1), Nat(args[0] << 1);
  if (name == "s1") return want(1), Nat((args[0] << 1) + 1);
  if (name == "smash") return want(2), smash(args[0], args[1]);
  for (Builtin b : {Builtin::Add, Builtin::Mul, Builtin::Len, Builtin::Half, Builtin::Msp,
                    Builtin::Monus, Builtin::Min, Builtin::CondLE})
    if (name == builtin_name(b)) return eval_builtin(b, args);
  throw ParseError("unknown builtin '" + std::string(name) + "'");
}

Nat eval(const TermPtr& t, std::span<Oracle> oracles, std::span<const Nat> args,
         CostLedger& ledger, const EvalOptions& options) {
  Evaluator ev(oracles, ledger, options);
  return ev.run(*t, args);
}

Nat eval(const TermPtr& t, std::span<Oracle> oracles, std::span<const Nat> args) {
  CostLedger ledger;
  return eval(t, oracles, args, ledger);
}

}  // namespace bfflab
