#include "bfflab/term.hpp"

#include <algorithm>
#include <optional>

#include "bfflab/errors.hpp"

namespace bfflab {

std::string to_string(const Rank& r) {
  return "(" + std::to_string(r.functions) + "," + std::to_string(r.numbers) + ")";
}

std::string_view builtin_name(Builtin b) {
  switch (b) {
    case Builtin::Add: return "add";
    case Builtin::Mul: return "mul";
    case Builtin::Len: return "len";
    case Builtin::Half: return "half";
    case Builtin::Msp: return "msp";
    case Builtin::Monus: return "monus";
    case Builtin::Min: return "min";
    case Builtin::CondLE: return "condle";
  }
  return "?";
}

std::size_t builtin_arity(Builtin b) {
  switch (b) {
    case Builtin::Len:
    case Builtin::Half: return 1;
    case Builtin::CondLE: return 4;
    default: return 2;
  }
}

namespace term {

namespace {
TermPtr leaf(TermKind kind, std::size_t a = 0, std::size_t b = 0) {
  auto t = std::make_shared<Term>();
  t->kind = kind;
  t->a = a;
  t->b = b;
  return t;
}
}  // namespace

TermPtr zero() { return leaf(TermKind::Zero); }
TermPtr s0() { return leaf(TermKind::SuccZero); }
TermPtr s1() { return leaf(TermKind::SuccOne); }
TermPtr proj(std::size_t n, std::size_t k) { return leaf(TermKind::Proj, n, k); }
TermPtr smash() { return leaf(TermKind::Smash); }
TermPtr ap(std::size_t j) { return leaf(TermKind::Ap, j); }
TermPtr arg(std::size_t i) { return leaf(TermKind::Arg, i); }

TermPtr builtin(Builtin op) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Builtin;
  t->op = op;
  return t;
}

TermPtr lit(const Nat& n) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Lit;
  t->literal = n;
  return t;
}

TermPtr comp(TermPtr h, std::vector<TermPtr> gs) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Comp;
  t->children.reserve(gs.size() + 1);
  t->children.push_back(std::move(h));
  for (auto& g : gs) t->children.push_back(std::move(g));
  return t;
}

TermPtr expand(TermPtr inner, std::size_t added_functions, std::size_t added_numbers) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Expand;
  t->a = added_functions;
  t->b = added_numbers;
  t->children.push_back(std::move(inner));
  return t;
}

TermPtr lrn(TermPtr g, TermPtr h1, TermPtr h2, TermPtr k) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Lrn;
  t->children = {std::move(g), std::move(h1), std::move(h2), std::move(k)};
  return t;
}

TermPtr lrn1(TermPtr g, TermPtr h, TermPtr k) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Lrn1;
  t->children = {std::move(g), std::move(h), std::move(k)};
  return t;
}

TermPtr apply(std::size_t j, TermPtr t) { return comp(ap(j), {std::move(t)}); }

TermPtr call(Builtin op, std::vector<TermPtr> args) { return comp(builtin(op), std::move(args)); }

}  // namespace term

// ---------------------------------------------------------------------------
// Rank inference and validation

namespace {

/// Bottom-up rank requirement: at least `functions` functions; number arity
/// either exactly `numbers` or, when flexible, at least `numbers`.
struct RankReq {
  std::size_t functions = 0;
  std::size_t numbers = 0;
  bool flexible_numbers = false;
};

RankReq infer(const Term& t);

RankReq fixed(std::size_t l) { return {0, l, false}; }

RankReq unify(const std::vector<RankReq>& reqs) {
  RankReq out{0, 0, true};
  for (const RankReq& r : reqs) {
    out.functions = std::max(out.functions, r.functions);
    if (!r.flexible_numbers) {
      out.numbers = r.numbers;
      out.flexible_numbers = false;
    } else if (out.flexible_numbers) {
      out.numbers = std::max(out.numbers, r.numbers);
    }
  }
  return out;
}

/// Converts a child's requirement into one on its parent when the child sees
/// `shift` more numbers than the parent (negative: fewer).
RankReq shifted(RankReq r, long shift) {
  long n = static_cast<long>(r.numbers) - shift;
  r.numbers = n < 0 ? 0 : static_cast<std::size_t>(n);
  return r;
}

RankReq infer(const Term& t) {
  switch (t.kind) {
    case TermKind::Zero:
    case TermKind::SuccZero:
    case TermKind::SuccOne: return fixed(1);
    case TermKind::Proj: return fixed(t.a);
    case TermKind::Smash: return fixed(2);
    case TermKind::Builtin: return fixed(builtin_arity(t.op));
    case TermKind::Ap: return {t.a + 1, 1, false};
    case TermKind::Arg: return {0, t.a + 1, true};
    case TermKind::Lit: return {0, 0, true};
    case TermKind::Comp: {
      RankReq h = infer(*t.children[0]);
      std::vector<RankReq> gs;
      for (std::size_t i = 1; i < t.children.size(); ++i) gs.push_back(infer(*t.children[i]));
      RankReq r = unify(gs);
      r.functions = std::max(r.functions, h.functions);
      return r;
    }
    case TermKind::Expand: {
      RankReq r = infer(*t.children[0]);
      r.functions += t.a;
      r.numbers += t.b;
      return r;
    }
    case TermKind::Lrn: {
      return unify({shifted(infer(*t.children[0]), -1), shifted(infer(*t.children[1]), 1),
                    shifted(infer(*t.children[2]), 1), infer(*t.children[3])});
    }
    case TermKind::Lrn1: {
      RankReq r = unify({shifted(infer(*t.children[0]), -1), shifted(infer(*t.children[1]), 1),
                         infer(*t.children[2])});
      if (r.flexible_numbers) r.numbers = std::max<std::size_t>(r.numbers, 1);
      return r;
    }
  }
  return {};
}

class Validator {
 public:
  std::vector<RankIssue> issues;

  void check(const Term& t, Rank want, const std::string& path) {
    auto mismatch = [&](const std::string& expected) {
      issues.push_back({RankIssue::Kind::RankMismatch, path.empty() ? "/" : path,
                        to_string(rank_of(t)), expected});
    };
    auto want_numbers = [&](std::size_t l) {
      if (want.numbers != l) mismatch(to_string(Rank{want.functions, want.numbers}));
    };
    switch (t.kind) {
      case TermKind::Zero:
      case TermKind::SuccZero:
      case TermKind::SuccOne: want_numbers(1); return;
      case TermKind::Proj:
        if (t.b < 1 || t.b > t.a) {
          issues.push_back({RankIssue::Kind::RankMismatch, path.empty() ? "/" : path,
                            "(proj " + std::to_string(t.a) + " " + std::to_string(t.b) + ")",
                            "1 <= k <= n"});
          return;
        }
        want_numbers(t.a);
        return;
      case TermKind::Smash: want_numbers(2); return;
      case TermKind::Builtin: want_numbers(builtin_arity(t.op)); return;
      case TermKind::Ap:
        if (t.a >= want.functions)
          issues.push_back({RankIssue::Kind::UnknownOracleIndex, path.empty() ? "/" : path,
                            "oracle " + std::to_string(t.a),
                            std::to_string(want.functions) + " function arguments"});
        want_numbers(1);
        return;
      case TermKind::Arg:
        if (t.a >= want.numbers)
          mismatch("number argument " + std::to_string(t.a) + " needs rank with more than " +
                   std::to_string(t.a) + " numbers, context " + to_string(want));
        return;
      case TermKind::Lit: return;
      case TermKind::Comp: {
        const std::size_t m = t.children.size() - 1;
        check(*t.children[0], {want.functions, m}, path + "/0");
        for (std::size_t i = 1; i < t.children.size(); ++i)
          check(*t.children[i], want, path + "/" + std::to_string(i));
        return;
      }
      case TermKind::Expand:
        if (want.functions < t.a || want.numbers < t.b) {
          mismatch("at least " + to_string(Rank{t.a, t.b}));
          return;
        }
        check(*t.children[0], {want.functions - t.a, want.numbers - t.b}, path + "/0");
        return;
      case TermKind::Lrn:
      case TermKind::Lrn1: {
        if (want.numbers < 1) {
          mismatch("at least one number argument for the recursion variable");
          return;
        }
        const std::size_t l = want.numbers - 1;
        const std::size_t last = t.children.size() - 1;
        check(*t.children[0], {want.functions, l}, path + "/0");
        for (std::size_t i = 1; i < last; ++i)
          check(*t.children[i], {want.functions, l + 2}, path + "/" + std::to_string(i));
        check(*t.children[last], {want.functions, l + 1}, path + "/" + std::to_string(last));
        return;
      }
    }
  }

 private:
  static Rank rank_of(const Term& t) {
    RankReq r = infer(t);
    return {r.functions, r.numbers};
  }
};

}  // namespace

std::string RankIssue::message() const {
  const char* k = kind == Kind::RankMismatch ? "RankMismatch" : "UnknownOracleIndex";
  return std::string(k) + " at " + path + ": found " + found + ", expected " + expected;
}

std::vector<RankIssue> validate_term(const TermPtr& t, Rank expected) {
  Validator v;
  v.check(*t, expected, "");
  return std::move(v.issues);
}

Rank rank(const TermPtr& t) {
  RankReq r = infer(*t);
  return {r.functions, r.numbers};
}

// ---------------------------------------------------------------------------
// Text form

namespace {

std::size_t parse_index(const SExpr& e) {
  if (e.is_list) throw ParseError("expected an index, got " + e.to_string(), e.line);
  Nat n = parse_nat(e.atom);
  if (bit_length(n) > 32) throw ParseError("index too large: " + e.atom, e.line);
  return n.get_ui();
}

const SExpr& require_kw(const SExpr& e, std::string_view key) {
  const SExpr* v = keyword_arg(e, key);
  if (!v) throw ParseError("missing " + std::string(key) + " in " + std::string(e.head()), e.line);
  return *v;
}

}  // namespace

TermPtr parse_term(const SExpr& e) {
  if (e.is_atom()) {
    const std::string& a = e.atom;
    if (a == "o") return term::zero();
    if (a == "s0") return term::s0();
    if (a == "s1") return term::s1();
    if (a == "smash") return term::smash();
    for (Builtin b : {Builtin::Add, Builtin::Mul, Builtin::Len, Builtin::Half, Builtin::Msp,
                      Builtin::Monus, Builtin::Min, Builtin::CondLE})
      if (a == builtin_name(b)) return term::builtin(b);
    if (!a.empty() && a[0] >= '0' && a[0] <= '9') {
      try {
        return term::lit(parse_nat(a));
      } catch (const ParseError& err) {
        throw ParseError(err.what(), e.line);
      }
    }
    throw ParseError("unknown term atom '" + a + "'", e.line);
  }
  std::string_view head = e.head();
  const auto& it = e.items;
  if (head == "proj") {
    if (it.size() != 3) throw ParseError("(proj n k) takes two indices", e.line);
    return term::proj(parse_index(it[1]), parse_index(it[2]));
  }
  if (head == "x") {
    if (it.size() != 2) throw ParseError("(x i) takes one index", e.line);
    return term::arg(parse_index(it[1]));
  }
  if (head == "ap") {
    if (it.size() == 2) return term::ap(parse_index(it[1]));
    if (it.size() == 3) return term::apply(parse_index(it[1]), parse_term(it[2]));
    throw ParseError("(ap j <t>) takes an index and a term", e.line);
  }
  if (head == "comp") {
    if (it.size() < 2) throw ParseError("(comp <h> <g>...) needs a head", e.line);
    std::vector<TermPtr> gs;
    for (std::size_t i = 2; i < it.size(); ++i) gs.push_back(parse_term(it[i]));
    return term::comp(parse_term(it[1]), std::move(gs));
  }
  if (head == "expand") {
    if (it.size() != 4) throw ParseError("(expand <t> k l) takes a term and two counts", e.line);
    return term::expand(parse_term(it[1]), parse_index(it[2]), parse_index(it[3]));
  }
  if (head == "lrn") {
    check_keywords(e, {":g", ":h1", ":h2", ":k"});
    return term::lrn(parse_term(require_kw(e, ":g")), parse_term(require_kw(e, ":h1")),
                     parse_term(require_kw(e, ":h2")), parse_term(require_kw(e, ":k")));
  }
  if (head == "lrn1") {
    check_keywords(e, {":g", ":h", ":k"});
    return term::lrn1(parse_term(require_kw(e, ":g")), parse_term(require_kw(e, ":h")),
                      parse_term(require_kw(e, ":k")));
  }
  throw ParseError("unknown term form '" + e.to_string() + "'", e.line);
}

TermPtr parse_term(std::string_view text) { return parse_term(parse_sexpr(text)); }

TermPtr load_term(const std::string& path) { return parse_term(read_file(path)); }

std::string format_term(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Zero: return "o";
    case TermKind::SuccZero: return "s0";
    case TermKind::SuccOne: return "s1";
    case TermKind::Smash: return "smash";
    case TermKind::Builtin: return std::string(builtin_name(t->op));
    case TermKind::Proj: return "(proj " + std::to_string(t->a) + " " + std::to_string(t->b) + ")";
    case TermKind::Ap: return "(ap " + std::to_string(t->a) + ")";
    case TermKind::Arg: return "(x " + std::to_string(t->a) + ")";
    case TermKind::Lit: return to_string(t->literal);
    case TermKind::Comp: {
      const Term& h = *t->children[0];
      if (h.kind == TermKind::Ap && t->children.size() == 2)
        return "(ap " + std::to_string(h.a) + " " + format_term(t->children[1]) + ")";
      std::string s = "(comp";
      for (const auto& c : t->children) s += " " + format_term(c);
      return s + ")";
    }
    case TermKind::Expand:
      return "(expand " + format_term(t->children[0]) + " " + std::to_string(t->a) + " " +
             std::to_string(t->b) + ")";
    case TermKind::Lrn:
      return "(lrn :g " + format_term(t->children[0]) + " :h1 " + format_term(t->children[1]) +
             " :h2 " + format_term(t->children[2]) + " :k " + format_term(t->children[3]) + ")";
    case TermKind::Lrn1:
      return "(lrn1 :g " + format_term(t->children[0]) + " :h " + format_term(t->children[1]) +
             " :k " + format_term(t->children[2]) + ")";
  }
  return "?";
}

std::size_t term_size(const TermPtr& t) {
  std::size_t n = 1;
  for (const auto& c : t->children) n += term_size(c);
  return n;
}

std::size_t ap_nesting(const TermPtr& t) {
  if (t->kind == TermKind::Ap) return 1;
  std::size_t best = 0;
  if (t->kind == TermKind::Comp) {
    for (std::size_t i = 1; i < t->children.size(); ++i)
      best = std::max(best, ap_nesting(t->children[i]));
    return ap_nesting(t->children[0]) + best;
  }
  for (const auto& c : t->children) best = std::max(best, ap_nesting(c));
  return best;
}

}  // namespace bfflab
