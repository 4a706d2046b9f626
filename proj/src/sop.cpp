#include "bfflab/sop.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <set>

#include "bfflab/errors.hpp"

namespace bfflab {

namespace sop {

namespace {
std::shared_ptr<Sop> node(SopKind kind) {
  auto s = std::make_shared<Sop>();
  s->kind = kind;
  return s;
}
}  // namespace

SopPtr constant(const Nat& n) {
  auto s = node(SopKind::Const);
  s->value = n;
  return s;
}

SopPtr len(std::size_t i) {
  auto s = node(SopKind::LenVar);
  s->index = i;
  return s;
}

SopPtr plus(SopPtr p, SopPtr q) {
  auto s = node(SopKind::Plus);
  s->lhs = std::move(p);
  s->rhs = std::move(q);
  return s;
}

SopPtr times(SopPtr p, SopPtr q) {
  auto s = node(SopKind::Times);
  s->lhs = std::move(p);
  s->rhs = std::move(q);
  return s;
}

SopPtr norm(std::size_t j, SopPtr p) {
  auto s = node(SopKind::NormApp);
  s->index = j;
  s->lhs = std::move(p);
  return s;
}

}  // namespace sop

int compare(const Sop& a, const Sop& b) {
  if (&a == &b) return 0;
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  switch (a.kind) {
    case SopKind::Const: return a.value == b.value ? 0 : (a.value < b.value ? -1 : 1);
    case SopKind::LenVar: return a.index == b.index ? 0 : (a.index < b.index ? -1 : 1);
    case SopKind::NormApp:
      if (a.index != b.index) return a.index < b.index ? -1 : 1;
      return compare(*a.lhs, *b.lhs);
    case SopKind::Plus:
    case SopKind::Times:
      if (int c = compare(*a.lhs, *b.lhs)) return c;
      return compare(*a.rhs, *b.rhs);
  }
  return 0;
}

bool same_sop(const SopPtr& a, const SopPtr& b) { return compare(*a, *b) == 0; }

std::size_t depth(const SopPtr& p) {
  switch (p->kind) {
    case SopKind::Const:
    case SopKind::LenVar: return 0;
    case SopKind::Plus:
    case SopKind::Times: return std::max(depth(p->lhs), depth(p->rhs));
    case SopKind::NormApp: return depth(p->lhs) + 1;
  }
  return 0;
}

namespace {

void visit(const SopPtr& p, const std::function<void(const SopPtr&)>& fn) {
  fn(p);
  if (p->lhs) visit(p->lhs, fn);
  if (p->rhs) visit(p->rhs, fn);
}

}  // namespace

std::size_t len_var_count(const SopPtr& p) {
  std::size_t n = 0;
  visit(p, [&](const SopPtr& s) {
    if (s->kind == SopKind::LenVar) n = std::max(n, s->index + 1);
  });
  return n;
}

std::size_t function_count(const SopPtr& p) {
  std::size_t n = 0;
  visit(p, [&](const SopPtr& s) {
    if (s->kind == SopKind::NormApp) n = std::max(n, s->index + 1);
  });
  return n;
}

namespace {

std::size_t index_of(const SExpr& e) {
  if (!e.is_atom()) throw ParseError("expected an index", e.line);
  Nat n = parse_nat(e.atom);
  return static_cast<std::size_t>(to_u64(n));
}

}  // namespace

SopPtr parse_sop(const SExpr& e) {
  if (e.is_atom()) {
    if (!e.atom.empty() && std::isdigit(static_cast<unsigned char>(e.atom[0])))
      return sop::constant(parse_nat(e.atom));
    throw ParseError("unexpected atom '" + e.atom + "' in polynomial", e.line);
  }
  const auto head = e.head();
  const auto& it = e.items;
  if (head == "c") {
    if (it.size() != 2) throw ParseError("(c n) takes one natural", e.line);
    if (!it[1].is_atom()) throw ParseError("expected a natural", e.line);
    return sop::constant(parse_nat(it[1].atom));
  }
  if (head == "lx") {
    if (it.size() != 2) throw ParseError("(lx i) takes one index", e.line);
    return sop::len(index_of(it[1]));
  }
  if (head == "nf") {
    if (it.size() != 3) throw ParseError("(nf j P) takes an index and a polynomial", e.line);
    return sop::norm(index_of(it[1]), parse_sop(it[2]));
  }
  if (head == "+" || head == "*") {
    if (it.size() < 3) throw ParseError(std::string(head) + " needs two operands", e.line);
    SopPtr acc = parse_sop(it[1]);
    for (std::size_t i = 2; i < it.size(); ++i)
      acc = head == "+" ? sop::plus(acc, parse_sop(it[i])) : sop::times(acc, parse_sop(it[i]));
    return acc;
  }
  throw ParseError("unknown polynomial form '" + std::string(head) + "'", e.line);
}

SopPtr parse_sop(std::string_view text) { return parse_sop(parse_sexpr(text)); }

SopPtr load_sop(const std::string& path) { return parse_sop(read_file(path)); }

std::string format_sop(const SopPtr& p) {
  switch (p->kind) {
    case SopKind::Const: return "(c " + to_string(p->value) + ")";
    case SopKind::LenVar: return "(lx " + std::to_string(p->index) + ")";
    case SopKind::Plus: return "(+ " + format_sop(p->lhs) + " " + format_sop(p->rhs) + ")";
    case SopKind::Times: return "(* " + format_sop(p->lhs) + " " + format_sop(p->rhs) + ")";
    case SopKind::NormApp:
      return "(nf " + std::to_string(p->index) + " " + format_sop(p->lhs) + ")";
  }
  return "";
}

Nat norm(const Oracle& f, const Nat& x, std::size_t cap) {
  if (x > cap) throw NormCapExceeded(to_string(x), cap);
  const std::uint64_t n = std::uint64_t{1} << x.get_ui();
  std::size_t best = 0;
  for (std::uint64_t y = 0; y < n; ++y)
    best = std::max(best, bit_length(f.peek(Nat(static_cast<unsigned long>(y)))));
  return Nat(static_cast<unsigned long>(best));
}

Nat table_norm(const Oracle& f, const Nat& x) {
  std::size_t best = 0;
  Nat covered = 0;
  for (const auto& [y, v] : f.table()) {
    if (bit_length(y) > x) break;
    best = std::max(best, bit_length(v));
    ++covered;
  }
  const Nat points = x.fits_ulong_p() && x.get_ui() < 4096 ? pow2(x.get_ui()) : covered + 1;
  if (covered < points) best = std::max(best, bit_length(f.default_value()));
  return Nat(static_cast<unsigned long>(best));
}

std::size_t default_norm_cap() {
  if (const char* env = std::getenv("BFFLAB_NORM_CAP")) {
    try {
      return static_cast<std::size_t>(to_u64(parse_nat(env)));
    } catch (const Error&) {
    }
  }
  return 20;
}

SopEnv SopEnv::from_args(std::span<const Nat> args, std::vector<const Oracle*> functions,
                         NormMethod method, std::size_t cap) {
  std::vector<Nat> lengths;
  lengths.reserve(args.size());
  for (const auto& a : args) lengths.emplace_back(static_cast<unsigned long>(bit_length(a)));
  return SopEnv(std::move(lengths), std::move(functions), method, cap);
}

const Nat& SopEnv::length(std::size_t i) const {
  if (i >= lengths_.size())
    throw RankError("|x" + std::to_string(i) + "| is not assigned");
  return lengths_[i];
}

Nat SopEnv::norm_of(std::size_t j, const Nat& x) const {
  if (j >= functions_.size() || functions_[j] == nullptr)
    throw RankError("function f" + std::to_string(j) + " is not assigned");
  auto key = std::make_pair(j, x);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  Nat v = method_ == NormMethod::Table ? table_norm(*functions_[j], x)
                                       : norm(*functions_[j], x, cap_);
  cache_.emplace(std::move(key), v);
  return v;
}

Nat sop_eval(const SopPtr& p, const SopEnv& env) {
  switch (p->kind) {
    case SopKind::Const: return p->value;
    case SopKind::LenVar: return env.length(p->index);
    case SopKind::Plus: return sop_eval(p->lhs, env) + sop_eval(p->rhs, env);
    case SopKind::Times: return sop_eval(p->lhs, env) * sop_eval(p->rhs, env);
    case SopKind::NormApp: return env.norm_of(p->index, sop_eval(p->lhs, env));
  }
  return 0;
}

namespace {

struct SopLess {
  bool operator()(const SopPtr& a, const SopPtr& b) const { return compare(*a, *b) < 0; }
};

/// Distinct NormApp nodes of depth m, grouped by function index in first
/// occurrence order (pre-order, left to right).
std::map<std::size_t, std::vector<SopPtr>> level(const SopPtr& p, std::size_t m) {
  std::map<std::size_t, std::vector<SopPtr>> out;
  std::set<SopPtr, SopLess> seen;
  visit(p, [&](const SopPtr& s) {
    if (s->kind == SopKind::NormApp && depth(s) == m && seen.insert(s).second)
      out[s->index].push_back(s);
  });
  return out;
}

SopPtr rewrite(const SopPtr& p, const std::map<SopPtr, SopPtr, SopLess>& repl) {
  if (auto it = repl.find(p); it != repl.end()) return it->second;
  switch (p->kind) {
    case SopKind::Const:
    case SopKind::LenVar: return p;
    case SopKind::Plus: return sop::plus(rewrite(p->lhs, repl), rewrite(p->rhs, repl));
    case SopKind::Times: return sop::times(rewrite(p->lhs, repl), rewrite(p->rhs, repl));
    case SopKind::NormApp: return sop::norm(p->index, rewrite(p->lhs, repl));
  }
  return p;
}

std::set<std::size_t> functions_in(const SopPtr& p) {
  std::set<std::size_t> js;
  visit(p, [&](const SopPtr& s) {
    if (s->kind == SopKind::NormApp) js.insert(s->index);
  });
  return js;
}

}  // namespace

SopPtr regularize(const SopPtr& p) {
  const std::size_t d = depth(p);
  const auto js = functions_in(p);
  SopPtr cur = p;
  SopPtr below = sop::constant(0);  // a representative of depth m - 1
  std::map<std::size_t, SopPtr> prev_arg;
  for (std::size_t m = 1; m <= d; ++m) {
    auto groups = level(cur, m);
    std::map<SopPtr, SopPtr, SopLess> repl;
    std::map<std::size_t, SopPtr> args;
    SopPtr rep_here;
    for (auto& [j, nodes] : groups) {
      SopPtr arg = nodes.front()->lhs;
      for (std::size_t i = 1; i < nodes.size(); ++i) arg = sop::plus(arg, nodes[i]->lhs);
      if (auto it = prev_arg.find(j); it != prev_arg.end()) arg = sop::plus(arg, it->second);
      SopPtr rep = sop::norm(j, arg);
      for (const auto& n : nodes) repl.emplace(n, rep);
      args[j] = arg;
      if (!rep_here) rep_here = rep;
    }
    cur = rewrite(cur, repl);
    for (std::size_t j : js) {
      if (groups.count(j)) continue;
      SopPtr arg = below;
      if (auto it = prev_arg.find(j); it != prev_arg.end()) arg = sop::plus(arg, it->second);
      cur = sop::plus(cur, sop::times(sop::constant(0), sop::norm(j, arg)));
      args[j] = arg;
    }
    prev_arg = std::move(args);
    below = rep_here;
  }
  return cur;
}

bool is_regular(const SopPtr& p) {
  const std::size_t d = depth(p);
  const auto js = functions_in(p);
  for (std::size_t m = 1; m <= d; ++m) {
    auto groups = level(p, m);
    for (std::size_t j : js) {
      auto it = groups.find(j);
      if (it == groups.end() || it->second.size() != 1) return false;
    }
  }
  return true;
}

std::vector<SopPtr> norm_applications(const SopPtr& p) {
  std::vector<SopPtr> out;
  const std::size_t d = depth(p);
  for (std::size_t m = 1; m <= d; ++m)
    for (auto& [j, nodes] : level(p, m)) out.insert(out.end(), nodes.begin(), nodes.end());
  return out;
}

std::optional<std::pair<std::size_t, std::size_t>> chain_violation(const SopPtr& p,
                                                                   const SopEnv& env) {
  const std::size_t d = depth(p);
  std::map<std::size_t, std::pair<std::size_t, Nat>> last;  // j -> (depth, argument value)
  for (std::size_t m = 1; m <= d; ++m) {
    for (auto& [j, nodes] : level(p, m)) {
      Nat v = sop_eval(nodes.front()->lhs, env);
      for (std::size_t i = 1; i < nodes.size(); ++i) v = std::max(v, sop_eval(nodes[i]->lhs, env));
      auto it = last.find(j);
      if (it != last.end() && v < it->second.second) return std::make_pair(it->second.first, m);
      last[j] = {m, v};
    }
  }
  return std::nullopt;
}

}  // namespace bfflab
