#include "bfflab/selftest.hpp"

#include <bit>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "bfflab/bounds.hpp"
#include "bfflab/errors.hpp"
#include "bfflab/eval.hpp"
#include "bfflab/gen.hpp"
#include "bfflab/otm.hpp"
#include "bfflab/schemes.hpp"
#include "bfflab/sop.hpp"
#include "bfflab/witness.hpp"

namespace bfflab::selftest {

namespace {

using namespace term;

Nat nat(std::uint64_t v) { return Nat(static_cast<unsigned long>(v)); }

std::uint64_t word_len(std::uint64_t v) { return static_cast<std::uint64_t>(std::bit_width(v)); }

struct Tally {
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
  std::string first;

  void check(bool ok, const std::function<std::string()>& what) {
    ++checks;
    if (ok) return;
    if (violations++ == 0) first = what();
  }
  void pass(std::uint64_t n) { checks += n; }
  void fail(std::string what) {
    ++checks;
    if (violations++ == 0) first = std::move(what);
  }
};

std::vector<const Oracle*> pointers(const std::vector<Oracle>& fs) {
  std::vector<const Oracle*> out;
  for (const auto& f : fs) out.push_back(&f);
  return out;
}

EvalOptions quiet() {
  EvalOptions o;
  o.log_queries = false;
  return o;
}

// 1. |u| <= P iff some witness tuple reaches u.

Tally witness_biconditional(const Options& opt, std::string& detail) {
  constexpr std::size_t kWithF = 32;
  constexpr std::size_t kWithoutF = 8;
  constexpr std::uint64_t kTupleCap = 1u << 10;
  gen::Rng rng(opt.seed + 1);
  gen::SopShape shape;
  shape.depth = 2;
  shape.max_const = 4;
  shape.numbers = 2;
  shape.functions = 1;

  // Witness ranges grow with f, so the constant 7 oracle bounds the search
  // for every table with values <= 7.
  const Oracle top(Nat(7));
  const std::vector<std::uint64_t> xdom{0, 1, 3};
  std::vector<SopPtr> family;
  std::size_t drawn = 0;
  std::size_t with_f = 0;
  std::size_t deep = 0;
  while (family.size() < kWithF + kWithoutF) {
    ++drawn;
    SopPtr p = gen::random_sop(rng, shape);
    if (!is_regular(p)) p = regularize(p);
    const std::size_t l = len_var_count(p);
    SopEnv env(std::vector<Nat>(l, nat(word_len(xdom.back()))), {&top}, NormMethod::Table);
    std::uint64_t bits = 0;
    for (const auto& node : norm_applications(p)) bits += to_u64(sop_eval(node->lhs, env));
    if (bits > 10 || (std::uint64_t{1} << bits) > kTupleCap) continue;
    const bool has_f = function_count(p) > 0;
    if (has_f ? with_f == kWithF : family.size() - with_f == kWithoutF) continue;
    if (has_f) ++with_f;
    if (depth(p) == 2) ++deep;
    family.push_back(p);
  }

  Tally t;
  for (const auto& p : family) {
    const std::size_t l = len_var_count(p);
    const WitnessTerms w = witness_terms(p, l);
    std::size_t combos = 1;
    for (std::size_t i = 0; i < l; ++i) combos *= xdom.size();
    const std::uint64_t tables = function_count(p) > 0 ? 4096 : 1;
    for (std::uint64_t ti = 0; ti < tables; ++ti) {
      std::vector<Oracle> fs{gen::nth_table(ti, 0, 3, 7)};
      for (std::size_t c = 0; c < combos; ++c) {
        std::vector<Nat> xs;
        for (std::size_t i = 0, r = c; i < l; ++i, r /= xdom.size()) xs.push_back(nat(xdom[r % xdom.size()]));
        std::string why;
        bool ok = false;
        try {
          auto rep = witness_check(p, w, fs, xs, 0, 255, std::uint64_t{1} << 20);
          ok = rep.disagreements.empty();
          if (!ok) why = "u=" + to_string(rep.disagreements.front().u);
        } catch (const Error& e) {
          why = e.what();
        }
        t.check(ok, [&] { return format_sop(p) + " table " + std::to_string(ti) + ": " + why; });
      }
    }
  }
  detail = std::to_string(family.size()) + " sops (" + std::to_string(with_f) + " with |f|, " +
           std::to_string(deep) + " of depth 2, " + std::to_string(drawn) + " drawn)";
  return t;
}

// 2. F <= K* iff |F| <= |K|.

Tally kstar_equivalence(const Options&, std::string& detail) {
  constexpr std::uint64_t kMax = 4095;
  std::vector<Nat> ns;
  for (std::uint64_t v = 0; v <= kMax; ++v) ns.push_back(nat(v));
  Tally t;
  for (std::uint64_t k = 0; k <= kMax; ++k) {
    const Nat ks = kstar(ns[k]);
    for (std::uint64_t f = 0; f <= kMax; ++f) {
      const bool lhs = ns[f] <= ks;
      const bool rhs = word_len(f) <= word_len(k);
      t.check(lhs == rhs, [&] { return "F=" + std::to_string(f) + " K=" + std::to_string(k); });
    }
  }
  detail = "F, K in [0, 4095]";
  return t;
}

// 3. compile_mlrn against plain simultaneous recursion.

/// Plain simultaneous recursion, each value capped by its bound. Sets
/// `clipped` when some bound (including the one at u = 0) fails.
std::vector<Nat> direct_mlrn(const MlrnSystem& sys, std::vector<Oracle>& fs,
                             const std::vector<Nat>& alpha, const Nat& u, bool* clipped = nullptr) {
  const std::size_t n = sys.size();
  const EvalOptions o = quiet();
  CostLedger ledger;
  auto bounded = [&](std::size_t i, const Nat& v, const std::vector<Nat>& cur, const Nat& raw) {
    std::vector<Nat> kargs{v};
    kargs.insert(kargs.end(), alpha.begin(), alpha.end());
    kargs.insert(kargs.end(), cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(i));
    const Nat k = eval(sys.k[i], fs, kargs, ledger, o);
    if (raw <= k) return raw;
    if (clipped) *clipped = true;
    return k;
  };
  std::vector<Nat> cur(n);
  for (std::size_t i = 0; i < n; ++i) {
    cur[i] = eval(sys.g[i], fs, alpha, ledger, o);
    if (clipped) bounded(i, 0, cur, cur[i]);
  }
  for (std::size_t len = 1; len <= bit_length(u); ++len) {
    const Nat v = msp(u, nat(len));
    std::vector<Nat> hargs{v};
    hargs.insert(hargs.end(), cur.begin(), cur.end());
    hargs.insert(hargs.end(), alpha.begin(), alpha.end());
    std::vector<Nat> next(n);
    for (std::size_t i = 0; i < n; ++i) next[i] = bounded(i, v, next, eval(sys.h[i], fs, hargs, ledger, o));
    cur = std::move(next);
  }
  return cur;
}

/// K_i = B_i(u, alpha) + F_{i-1}(u) with random B_i, so K_i grows with the
/// earlier values; G_i and H_i are random terms cut down to B_i.
MlrnSystem random_mlrn(gen::Rng& rng, std::size_t n) {
  gen::TermShape shape;
  shape.depth = 3;
  MlrnSystem s;
  for (std::size_t i = 0; i < n; ++i) {
    TermPtr b = gen::random_term(rng, Rank{1, 2}, shape);
    s.g.push_back(call(Builtin::Min, {gen::random_term(rng, Rank{1, 1}, shape),
                                      comp(b, {lit(0), arg(0)})}));
    s.h.push_back(call(Builtin::Min, {gen::random_term(rng, Rank{1, 2 + n}, shape),
                                      comp(b, {arg(0), arg(1 + n)})}));
    s.k.push_back(i == 0 ? b : call(Builtin::Add, {b, arg(1 + i)}));
  }
  return s;
}

Tally mlrn_construction(const Options& opt, std::string& detail) {
  constexpr std::size_t kGenerated = 20;
  gen::Rng rng(opt.seed + 3);
  std::vector<Oracle> fs{gen::table_oracle(rng, 0, 15, 255)};

  struct Case {
    MlrnSystem sys;
    std::vector<Nat> alpha;
  };
  std::vector<Case> cases;
  auto fixed = [](std::vector<const char*> g, std::vector<const char*> h,
                  std::vector<const char*> k) {
    MlrnSystem s;
    for (auto x : g) s.g.push_back(parse_term(x));
    for (auto x : h) s.h.push_back(parse_term(x));
    for (auto x : k) s.k.push_back(parse_term(x));
    return s;
  };
  cases.push_back({fixed({"0", "1"}, {"(comp add (x 1) 1)", "(comp mul (x 2) 2)"},
                         {"(comp add (x 0) 1)", "(comp smash 1 (x 0))"}),
                   {}});
  cases.push_back({fixed({"0", "1", "(comp min (x 0) 1)"},
                         {"(comp add (x 1) 1)", "(comp mul (x 2) 2)",
                          "(comp add (x 1) (comp min (x 2) (ap 0 (x 4))))"},
                         {"(comp add (x 0) 1)", "(comp smash 1 (x 0))", "(comp add (x 2) (x 3))"}),
                   {nat(5)}});

  std::size_t drawn = 0;
  std::size_t generated = 0;
  std::size_t three = 0;
  while (generated < kGenerated + 1) {
    ++drawn;
    const std::size_t n = generated == kGenerated ? 3 : 2;
    MlrnSystem s = random_mlrn(rng, n);
    std::vector<Nat> alpha{nat(gen::uniform(rng, 0, 9))};
    bool clipped = false;
    try {
      for (std::uint64_t u = 0; u < 1024 && !clipped; ++u) direct_mlrn(s, fs, alpha, nat(u), &clipped);
    } catch (const Error&) {
      continue;
    }
    if (clipped) continue;
    cases.push_back({std::move(s), std::move(alpha)});
    ++generated;
    if (n == 3) ++three;
  }

  Tally t;
  std::size_t nontrivial = 0;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto& [sys, alpha] = cases[c];
    auto f = compile_mlrn(mlrn_callbacks(sys, fs, quiet()));
    auto strict = compile_mlrn(mlrn_callbacks(sys, fs, quiet()), BoundMode::Strict);
    bool varies = false;
    std::vector<Nat> first;
    for (std::uint64_t u = 0; u < 1024; ++u) {
      std::vector<Nat> want, got, checked;
      std::string why;
      bool clipped = false;
      try {
        want = direct_mlrn(sys, fs, alpha, nat(u), &clipped);
        if (clipped) why = "bound fails";
        got = f(nat(u), alpha);
        checked = u < 256 ? strict(nat(u), alpha) : got;
      } catch (const Error& e) {
        why = e.what();
      }
      t.check(why.empty() && want == got && want == checked,
              [&] { return "system " + std::to_string(c) + " u=" + std::to_string(u) + " " + why; });
      if (u == 0) first = want;
      else if (want != first) varies = true;
    }
    if (varies) ++nontrivial;
  }
  detail = std::to_string(cases.size()) + " systems (" + std::to_string(three + 1) +
           " with n=3, " + std::to_string(nontrivial) + " non-constant, " +
           std::to_string(drawn) + " drawn)";
  return t;
}

// 4. Clocked PBRPL evaluation against F*(P).

PbrplSystem random_pbrpl(gen::Rng& rng, std::size_t nx) {
  gen::TermShape shape;
  shape.depth = 2;
  const std::uint64_t k = gen::uniform(rng, 0, 5);
  const std::uint64_t m = gen::uniform(rng, 2, 8);
  const bool by_length = gen::chance(rng, 0.5);
  TermPtr stop = by_length ? call(Builtin::Add, {call(Builtin::Len, {arg(0)}), lit(nat(k))})
                           : lit(nat(k));
  TermPtr step = call(Builtin::Min, {gen::random_term(rng, Rank{1, nx + 2}, shape),
                                     lit(all_ones(m))});
  PbrplSystem s;
  s.g = gen::random_term(rng, Rank{1, nx}, shape);
  s.h = call(Builtin::CondLE, {arg(nx + 1), stop, step, arg(nx)});
  gen::SopShape ps;
  ps.depth = 1;
  ps.numbers = nx;
  ps.max_const = 3;
  SopPtr settle = sop::constant(nat(k + 1));
  if (by_length) settle = sop::plus(sop::len(0), settle);
  s.p = sop::plus(gen::random_sop(rng, ps), settle);
  s.q = sop::plus(infer_bound(s.g), sop::constant(nat(m)));
  return s;
}

Tally pbrpl_clocking(const Options& opt, std::string& detail) {
  constexpr std::size_t kSystems = 12;
  gen::Rng rng(opt.seed + 4);
  Tally t;
  std::size_t accepted = 0;
  std::size_t drawn = 0;
  std::size_t samples = 0;
  while (accepted < kSystems && drawn < 400) {
    ++drawn;
    const std::size_t nx = 1 + accepted % 2;
    PbrplSystem sys = random_pbrpl(rng, nx);
    std::vector<PbrplSample> domain;
    std::vector<Oracle> tables{Oracle(), Oracle::identity_on(0, 7)};
    for (int i = 0; i < 30; ++i) tables.push_back(gen::table_oracle(rng, 0, 7, 7));
    const std::vector<std::uint64_t> xdom{0, 1, 2, 5, 7};
    for (const auto& f : tables)
      for (std::uint64_t a : xdom) {
        std::vector<Nat> xs{nat(a)};
        if (nx == 2) xs.push_back(nat((a * 3 + 1) % 8));
        domain.push_back({{f}, xs});
      }
    try {
      if (!validate_pbrpl(sys, domain).ok()) continue;
    } catch (const Error&) {
      continue;
    }
    ++accepted;
    samples += domain.size();
    for (std::size_t s = 0; s < domain.size(); ++s) {
      const auto& d = domain[s];
      std::string why;
      bool ok = false;
      try {
        auto run = eval_pbrpl_clocked(sys, d.oracles, d.xs, 1u << 16, quiet());
        SopEnv env = SopEnv::from_args(d.xs, pointers(d.oracles), NormMethod::Table);
        const Nat want = pbrpl_iterate(sys, d.oracles, d.xs, sop_eval(sys.p, env), quiet());
        ok = run.value == want && run.steps + 1 > run.p_star;
        if (!ok) why = to_string(run.value) + " != " + to_string(want);
      } catch (const Error& e) {
        why = e.what();
      }
      t.check(ok, [&] {
        return "system " + std::to_string(accepted) + " sample " + std::to_string(s) + ": " + why;
      });
    }
  }
  if (accepted < kSystems) t.fail("only " + std::to_string(accepted) + " systems validated");
  detail = std::to_string(accepted) + " validated systems (" + std::to_string(drawn) +
           " drawn), " + std::to_string(samples) + " samples";
  return t;
}

// 5. |t| <= infer_bound(t).

Tally majorization(const Options& opt, std::string& detail) {
  constexpr std::size_t kTerms = 500;
  constexpr std::size_t kSamples = 200;
  gen::Rng rng(opt.seed + 5);
  gen::TermShape shape;
  shape.depth = 4;
  Tally t;
  std::size_t kept = 0;
  std::size_t drawn = 0;
  std::size_t expensive = 0;
  while (kept < kTerms) {
    ++drawn;
    TermPtr term = gen::random_term(rng, Rank{1, 2}, shape);
    SopPtr bound = infer_bound(term);
    std::vector<Sample> samples;
    for (std::size_t s = 0; s < kSamples; ++s)
      samples.push_back({{gen::table_oracle(rng, 0, 31, gen::uniform(rng, 0, 1) ? 63 : 4095)},
                         {nat(gen::uniform(rng, 0, 255)), nat(gen::uniform(rng, 0, 255))}});
    EvalOptions budget = quiet();
    budget.fuel = 1u << 20;
    auto probe = check_majorization(term, bound, std::span(samples).first(4), NormMethod::Table, budget);
    if (probe.skipped > 0) {
      ++expensive;
      continue;
    }
    auto rep = check_majorization(term, bound, samples, NormMethod::Table, budget);
    if (rep.checked < kSamples) {
      ++expensive;
      continue;
    }
    ++kept;
    t.pass(kSamples - rep.violations.size());
    for (const auto& v : rep.violations)
      t.fail(format_term(term) + ": " + to_string(v.value) + " vs bound " + to_string(v.bound));
  }
  detail = std::to_string(kept) + " terms x " + std::to_string(kSamples) + " samples (" +
           std::to_string(drawn) + " drawn, " + std::to_string(expensive) +
           " dropped for fuel or size)";
  return t;
}

// 6 and 7 share the machines and oracle family.

struct Bundled {
  std::string name;
  Machine machine;
  SopPtr bound;
  std::function<Nat(const Oracle&, const Nat&)> direct;
};

std::vector<Bundled> bundled(const Options& opt) {
  const std::string dir = (opt.fixtures.empty() ? default_fixtures() : opt.fixtures) + "/machines/";
  auto load = [&](const std::string& name, std::function<Nat(const Oracle&, const Nat&)> f) {
    return Bundled{name, load_machine(dir + name + ".otm"), load_sop(dir + name + ".sop"),
                   std::move(f)};
  };
  std::vector<Bundled> out;
  out.push_back(load("ap", [](const Oracle& f, const Nat& x) { return f.peek(x); }));
  out.push_back(load("ff", [](const Oracle& f, const Nat& x) { return f.peek(f.peek(x)); }));
  out.push_back(load("inc", [](const Oracle&, const Nat& x) { return Nat(x + 1); }));
  out.push_back(load("halt", [](const Oracle&, const Nat&) { return Nat(0); }));
  return out;
}

std::vector<Oracle> machine_oracles(std::uint64_t seed) {
  gen::Rng rng(seed);
  std::vector<Oracle> fs{Oracle(), Oracle::identity_on(0, 15)};
  for (int i = 0; i < 14; ++i) fs.push_back(gen::table_oracle(rng, 0, 15, i < 7 ? 15 : 255));
  return fs;
}

Tally otm_protocol(const Options& opt, std::string& detail) {
  Tally t;
  const auto machines = bundled(opt);
  const auto oracles = machine_oracles(opt.seed + 6);
  std::uint64_t runs = 0;
  for (const auto& b : machines) {
    for (std::size_t o = 0; o < oracles.size(); ++o) {
      for (std::uint64_t x = 0; x < 256; ++x) {
        std::vector<Oracle> fs;
        if (b.machine.oracles > 0) fs.push_back(oracles[o]);
        std::vector<Nat> in{nat(x)};
        const auto oin = b.machine.tape(TapeKind::OracleIn);
        std::string protocol;
        auto monitor = [&](const Configuration& c, bool was_query) {
          if (!was_query || !oin || !protocol.empty()) return;
          if (c.tapes[*oin].used() != 0 || c.tapes[*oin].head != 0)
            protocol = "oracle input tape not reset at step " + std::to_string(c.steps);
        };
        auto where = [&] {
          return b.name + " oracle " + std::to_string(o) + " x=" + std::to_string(x);
        };
        try {
          auto r = run(b.machine, fs, in, 1u << 20, monitor);
          ++runs;
          const Nat want = b.direct(oracles[o], nat(x));
          t.check(r.output == want && !r.rejected, [&] {
            return where() + ": output " + to_string(r.output) + " != " + to_string(want);
          });
          std::uint64_t bits = 0;
          for (const auto& q : r.query_log) bits += bit_length(oracles[o].peek(q.x));
          t.check(r.t_len == r.t_unit - r.queries + bits,
                  [&] { return where() + ": ledger " + std::to_string(r.t_len); });
          t.check(protocol.empty(), [&] { return where() + ": " + protocol; });
        } catch (const Error& e) {
          t.fail(where() + ": " + e.what());
        }
      }
      if (b.machine.oracles == 0) break;
    }
  }
  detail = std::to_string(machines.size()) + " machines, " + std::to_string(runs) + " runs";
  return t;
}

Tally time_bound(const Options& opt, std::string& detail) {
  Tally t;
  const auto machines = bundled(opt);
  const auto oracles = machine_oracles(opt.seed + 7);
  std::uint64_t worst = 0;
  std::size_t skipped = 0;
  for (const auto& b : machines) {
    std::vector<OtmSample> samples;
    for (const auto& f : oracles)
      for (std::uint64_t x = 0; x < 256; ++x) {
        OtmSample s;
        if (b.machine.oracles > 0) s.oracles.push_back(f);
        s.inputs.push_back(nat(x));
        samples.push_back(std::move(s));
      }
    auto rep = check_time_bound(b.machine, b.bound, samples);
    worst = std::max(worst, rep.max_t_unit);
    skipped += rep.skipped;
    t.pass(rep.checked);
    for (const auto& v : rep.violations)
      t.fail(b.name + " " + v.kind + " at step " + std::to_string(v.step) + ": " + v.detail);
  }
  if (skipped > 0) t.fail(std::to_string(skipped) + " samples skipped");
  detail = std::to_string(machines.size()) + " machines, max T_unit " + std::to_string(worst);
  return t;
}

// 8. regularize majorizes.

Tally regularization(const Options& opt, std::string& detail) {
  constexpr std::size_t kSops = 200;
  constexpr std::size_t kEnvs = 1000;
  gen::Rng rng(opt.seed + 8);
  gen::SopShape shape;
  shape.depth = 3;
  shape.functions = 2;
  shape.numbers = 3;
  shape.max_ops = 3;
  Tally t;
  std::size_t changed = 0;
  for (std::size_t i = 0; i < kSops; ++i) {
    SopPtr p = gen::random_sop(rng, shape);
    SopPtr r = regularize(p);
    if (!same_sop(p, r)) ++changed;
    t.check(is_regular(r), [&] { return "not regular: " + format_sop(r); });
    t.check(depth(r) == depth(p), [&] { return "depth changed: " + format_sop(p); });
    for (std::size_t e = 0; e < kEnvs; ++e) {
      std::vector<Oracle> fs;
      for (std::size_t j = 0; j < shape.functions; ++j)
        fs.push_back(gen::table_oracle(rng, 0, 63, gen::uniform(rng, 0, 1) ? 15 : 65535,
                                       gen::uniform(rng, 0, 3)));
      std::vector<Nat> lengths;
      for (std::size_t l = 0; l < shape.numbers; ++l) lengths.push_back(nat(gen::uniform(rng, 0, 12)));
      SopEnv env(lengths, pointers(fs), NormMethod::Table);
      const Nat a = sop_eval(p, env);
      const Nat b = sop_eval(r, env);
      t.check(b >= a, [&] {
        return format_sop(p) + ": " + to_string(b) + " < " + to_string(a);
      });
    }
  }
  detail = std::to_string(kSops) + " sops (" + std::to_string(changed) + " rewritten) x " +
           std::to_string(kEnvs) + " envs";
  return t;
}

struct Criterion {
  const char* name;
  double limit;
  Tally (*run)(const Options&, std::string&);
};

constexpr Criterion kTable[kCriteria] = {
    {"witness-biconditional", 60, witness_biconditional},
    {"kstar-equivalence", 5, kstar_equivalence},
    {"mlrn-construction", 60, mlrn_construction},
    {"pbrpl-clocking", 30, pbrpl_clocking},
    {"majorization", 120, majorization},
    {"otm-protocol", 30, otm_protocol},
    {"time-bound", 60, time_bound},
    {"regularization", 30, regularization},
};

}  // namespace

std::string default_fixtures() { return BFFLAB_FIXTURES; }

Outcome run_criterion(int id, const Options& options) {
  if (id < 1 || id > kCriteria) throw std::out_of_range("criterion " + std::to_string(id));
  const Criterion& c = kTable[id - 1];
  Outcome o;
  o.id = id;
  o.name = c.name;
  o.limit = c.limit;
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  try {
    Tally t = c.run(options, detail);
    o.checks = t.checks;
    o.violations = t.violations;
    if (!t.first.empty()) detail += "; first: " + t.first;
  } catch (const std::exception& e) {
    o.violations = 1;
    detail += std::string("aborted: ") + e.what();
  }
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.detail = detail;
  o.passed = o.violations == 0 && o.checks > 0 && o.seconds < o.limit;
  if (o.seconds >= o.limit) o.detail += "; over the time limit";
  return o;
}

std::vector<Outcome> run_all(const Options& options) {
  std::vector<Outcome> out;
  for (int id = 1; id <= kCriteria; ++id) out.push_back(run_criterion(id, options));
  return out;
}

std::string format_outcome(const Outcome& o) {
  char time[64];
  std::snprintf(time, sizeof time, "%.2fs/%.0fs", o.seconds, o.limit);
  std::ostringstream s;
  s << (o.passed ? "PASS" : "FAIL") << "  " << o.id << " " << o.name << "  checks=" << o.checks
    << " violations=" << o.violations << "  time=" << time << "  " << o.detail;
  return s.str();
}

}  // namespace bfflab::selftest
