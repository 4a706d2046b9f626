#include "bfflab/schemes.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "bfflab/errors.hpp"

namespace bfflab {

Nat sqbd(const Nat& a, const Nat& b) {
  Nat t = 2 * a + 1;
  return smash(2 * b + 1, 4 * t * t);
}

namespace seq {

std::size_t width_for(const Nat& a) { return bit_length(a) + 2; }

SequenceCode empty(std::size_t width) {
  if (width < 1) throw ElementTooWide("0", width);
  return SequenceCode{width, 0, 0};
}

SequenceCode encode_width(std::span<const Nat> elements, std::size_t width) {
  SequenceCode c = empty(width);
  for (const auto& e : elements) c = append(c, e);
  return c;
}

SequenceCode encode(std::span<const Nat> elements, const Nat& a) {
  return encode_width(elements, width_for(a));
}

Nat get(const SequenceCode& c, std::size_t i) {
  if (i >= c.length) throw IndexOutOfRange(i, c.length);
  Nat block = c.payload >> ((c.length - 1 - i) * c.width);
  Nat e;
  mpz_fdiv_r_2exp(e.get_mpz_t(), block.get_mpz_t(), c.width - 1);
  return e;
}

std::vector<Nat> decode(const SequenceCode& c) {
  std::vector<Nat> out;
  out.reserve(c.length);
  for (std::size_t i = 0; i < c.length; ++i) out.push_back(get(c, i));
  return out;
}

SequenceCode append(const SequenceCode& c, const Nat& v) {
  if (bit_length(v) > c.width - 1) throw ElementTooWide(to_string(v), c.width);
  SequenceCode r = c;
  r.payload = (c.payload << c.width) + pow2(c.width - 1) + v;
  ++r.length;
  return r;
}

SequenceCode widen(const SequenceCode& c, std::size_t width) {
  if (width == c.width) return c;
  if (width < c.width) throw ElementTooWide("block", width);
  auto elems = decode(c);
  return encode_width(elems, width);
}

}  // namespace seq

namespace {

Nat index_nat(std::size_t i) { return Nat(static_cast<unsigned long>(i)); }

/// Applies a value bound `k` to `raw` according to the mode.
Nat bounded(const Nat& raw, const Nat& k, BoundMode mode, const std::string& where) {
  if (raw <= k) return raw;
  if (mode == BoundMode::Strict) throw BoundViolation(where, to_string(raw), to_string(k));
  return k;
}

std::string at(const char* what, std::size_t i, const Nat& u) {
  return std::string(what) + std::to_string(i + 1) + " at u=" + to_string(u);
}

MlrnEvaluator compile_single(MlrnCallbacks sys, BoundMode mode) {
  return [sys = std::move(sys), mode](const Nat& u, const std::vector<Nat>& alpha) {
    Nat val = sys.g(0, alpha);
    if (mode == BoundMode::Strict) bounded(val, sys.k(0, Nat(0), alpha, {}), mode, at("F", 0, 0));
    const std::size_t len = bit_length(u);
    for (std::size_t i = 1; i <= len; ++i) {
      Nat v = msp(u, index_nat(i));
      Nat raw = sys.h(0, v, {val}, alpha);
      val = bounded(raw, sys.k(0, v, alpha, {}), mode, at("F", 0, v));
    }
    return std::vector<Nat>{val};
  };
}

}  // namespace

Nat mlrn_khat(const std::function<Nat(const Nat&)>& k1, const Nat& u) {
  Nat kh = 0;
  Nat best = k1(kh);
  const std::size_t len = bit_length(u);
  for (std::size_t i = 1; i <= len; ++i) {
    Nat v = msp(u, index_nat(i));
    Nat kv = k1(v);
    if (!(kv <= best)) {
      kh = v;
      best = kv;
    }
  }
  return kh;
}

Nat mlrn_kbar(const std::function<Nat(const Nat&)>& k1, const Nat& u) {
  return k1(mlrn_khat(k1, u));
}

MlrnEvaluator compile_mlrn(MlrnCallbacks sys, BoundMode mode) {
  if (sys.n == 0) throw RankError("empty recursion system");
  if (sys.n == 1) return compile_single(std::move(sys), mode);

  // Parameters of the remaining system: alpha ++ (payload, width, length).
  auto split = [](const std::vector<Nat>& ext) {
    const std::size_t m = ext.size() - 3;
    std::vector<Nat> alpha(ext.begin(), ext.begin() + static_cast<std::ptrdiff_t>(m));
    SequenceCode c{static_cast<std::size_t>(ext[m + 1].get_ui()), ext[m],
                   static_cast<std::size_t>(ext[m + 2].get_ui())};
    return std::make_pair(std::move(alpha), std::move(c));
  };
  auto extend = [](std::vector<Nat> alpha, const SequenceCode& c) {
    alpha.push_back(c.payload);
    alpha.push_back(index_nat(c.width));
    alpha.push_back(index_nat(c.length));
    return alpha;
  };

  MlrnCallbacks rest;
  rest.n = sys.n - 1;
  rest.g = [sys, split](std::size_t i, const std::vector<Nat>& ext) {
    return sys.g(i + 1, split(ext).first);
  };
  rest.h = [sys, split](std::size_t i, const Nat& v, const std::vector<Nat>& prev,
                        const std::vector<Nat>& ext) {
    auto [alpha, w] = split(ext);
    std::vector<Nat> full{seq::get(w, bit_length(v) > 0 ? bit_length(v) - 1 : 0)};
    full.insert(full.end(), prev.begin(), prev.end());
    return sys.h(i + 1, v, full, alpha);
  };
  rest.k = [sys, split](std::size_t i, const Nat& v, const std::vector<Nat>& ext,
                        const std::vector<Nat>& cur) {
    auto [alpha, w] = split(ext);
    std::vector<Nat> full{seq::get(w, bit_length(v))};
    full.insert(full.end(), cur.begin(), cur.end());
    return sys.k(i + 1, v, alpha, full);
  };
  MlrnEvaluator inner = compile_mlrn(rest, mode);

  auto put = [mode](const SequenceCode& c, const Nat& v, const Nat& u) {
    const Nat cap = all_ones(c.width - 1);
    return seq::append(c, bounded(v, cap, mode, "F1 block at u=" + to_string(u)));
  };

  auto code_of = [sys, mode, inner, extend, put](const Nat& u, const std::vector<Nat>& alpha) {
    auto k1 = [&](const Nat& x) { return sys.k(0, x, alpha, {}); };
    Nat kh = 0;
    Nat kbar = k1(kh);
    Nat first = sys.g(0, alpha);
    if (mode == BoundMode::Strict) bounded(first, kbar, mode, at("F", 0, 0));
    SequenceCode w = put(seq::empty(seq::width_for(kbar)), first, Nat(0));
    const std::size_t len = bit_length(u);
    for (std::size_t i = 1; i <= len; ++i) {
      Nat v = msp(u, index_nat(i));
      Nat half = msp(u, index_nat(i - 1));
      Nat kv = k1(v);
      if (!(kv <= kbar)) {
        kh = v;
        kbar = kv;
      }
      std::vector<Nat> prev{seq::get(w, bit_length(half))};
      auto others = inner(half, extend(alpha, w));
      prev.insert(prev.end(), others.begin(), others.end());
      Nat raw = sys.h(0, v, prev, alpha);
      if (mode == BoundMode::Strict) bounded(raw, kv, mode, at("F", 0, v));
      w = put(seq::widen(w, seq::width_for(kbar)), raw, v);
      Nat s = sqbd(kbar, v);
      w.payload = bounded(w.payload, s, mode, "W at u=" + to_string(v));
    }
    return w;
  };

  return [code_of, inner, extend](const Nat& u, const std::vector<Nat>& alpha) {
    SequenceCode w = code_of(u, alpha);
    std::vector<Nat> out{seq::get(w, bit_length(u))};
    auto others = inner(u, extend(alpha, w));
    out.insert(out.end(), others.begin(), others.end());
    return out;
  };
}

MlrnCallbacks mlrn_callbacks(const MlrnSystem& sys, std::span<Oracle> oracles,
                             EvalOptions options) {
  auto run = [oracles, options](const TermPtr& t, const std::vector<Nat>& args) {
    CostLedger ledger;
    return eval(t, oracles, args, ledger, options);
  };
  MlrnCallbacks cb;
  cb.n = sys.size();
  cb.g = [sys, run](std::size_t i, const std::vector<Nat>& alpha) { return run(sys.g[i], alpha); };
  cb.h = [sys, run](std::size_t i, const Nat& u, const std::vector<Nat>& prev,
                    const std::vector<Nat>& alpha) {
    std::vector<Nat> args{u};
    args.insert(args.end(), prev.begin(), prev.end());
    args.insert(args.end(), alpha.begin(), alpha.end());
    return run(sys.h[i], args);
  };
  cb.k = [sys, run](std::size_t i, const Nat& u, const std::vector<Nat>& alpha,
                    const std::vector<Nat>& cur) {
    std::vector<Nat> args{u};
    args.insert(args.end(), alpha.begin(), alpha.end());
    args.insert(args.end(), cur.begin(), cur.end());
    return run(sys.k[i], args);
  };
  return cb;
}

namespace {

std::vector<const Oracle*> pointers(std::span<const Oracle> oracles) {
  std::vector<const Oracle*> out;
  for (const auto& f : oracles) out.push_back(&f);
  return out;
}

/// Checks |v| <= bound; returns v or the clamped value 2^bound - 1.
Nat length_bounded(const Nat& v, const Nat& bound, BoundMode mode, const std::string& where) {
  if (bit_length(v) <= bound) return v;
  if (mode == BoundMode::Strict)
    throw BoundViolation(where, to_string(v), "2^" + to_string(bound) + " - 1");
  return all_ones(bound.get_ui());
}

}  // namespace

Nat eval_pbrn(const PbrnSystem& sys, std::span<Oracle> oracles, std::span<const Nat> xs,
              const Nat& y, const SchemeOptions& options) {
  CostLedger ledger;
  std::vector<Nat> args(xs.begin(), xs.end());
  std::vector<const Oracle*> fs;
  for (auto& f : oracles) fs.push_back(&f);

  auto q_at = [&](const Nat& v) {
    std::vector<Nat> lengths;
    for (const auto& x : xs) lengths.emplace_back(static_cast<unsigned long>(bit_length(x)));
    lengths.emplace_back(static_cast<unsigned long>(bit_length(v)));
    return sop_eval(sys.q, SopEnv(lengths, fs, options.norm_method, options.norm_cap));
  };

  Nat val = eval(sys.g, oracles, args, ledger, options.eval);
  val = length_bounded(val, q_at(0), options.mode, "y=0");
  const std::size_t len = bit_length(y);
  args.resize(xs.size() + 2);
  for (std::size_t i = 1; i <= len; ++i) {
    Nat v = msp(y, index_nat(i));
    args[xs.size()] = val;
    args[xs.size() + 1] = v;
    Nat raw = eval(sys.h, oracles, args, ledger, options.eval);
    val = length_bounded(raw, q_at(v), options.mode, "y=" + to_string(v));
  }
  return val;
}

PbrplRun eval_pbrpl_clocked(const PbrplSystem& sys, std::span<const Oracle> oracles,
                            std::span<const Nat> xs, std::uint64_t hard_cap,
                            const EvalOptions& options) {
  std::vector<Oracle> work(oracles.begin(), oracles.end());
  for (auto& f : work) f.clear_log();
  EvalOptions opt = options;
  opt.log_queries = true;
  CostLedger ledger;
  std::vector<Nat> args(xs.begin(), xs.end());

  PbrplRun run;
  run.value = eval(sys.g, work, args, ledger, opt);
  args.resize(xs.size() + 2);
  std::uint64_t u = 0;
  while (true) {
    std::vector<Oracle> restricted;
    for (const auto& f : work) restricted.push_back(f.restricted_to(f.log()));
    SopEnv env = SopEnv::from_args(xs, pointers(restricted), NormMethod::Table);
    run.p_star = sop_eval(sys.p, env);
    Nat q_star = sop_eval(sys.q, env);
    if (bit_length(run.value) > q_star)
      throw BoundViolation("y=" + std::to_string(u), to_string(run.value),
                           "2^" + to_string(q_star) + " - 1");
    if (Nat(static_cast<unsigned long>(u + 1)) > run.p_star) break;
    if (u >= hard_cap) throw NonTermination(hard_cap);
    args[xs.size()] = run.value;
    args[xs.size() + 1] = Nat(static_cast<unsigned long>(u));
    run.value = eval(sys.h, work, args, ledger, opt);
    ++u;
  }
  run.steps = Nat(static_cast<unsigned long>(u));
  for (const auto& f : work) {
    std::vector<Nat> pts(f.log());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    run.queried.push_back(std::move(pts));
  }
  return run;
}

namespace {

std::vector<Nat> trajectory(const PbrplSystem& sys, std::span<const Oracle> oracles,
                            std::span<const Nat> xs, std::uint64_t steps,
                            const EvalOptions& options) {
  std::vector<Oracle> work(oracles.begin(), oracles.end());
  EvalOptions opt = options;
  opt.log_queries = false;
  CostLedger ledger;
  std::vector<Nat> args(xs.begin(), xs.end());
  std::vector<Nat> out;
  out.reserve(steps + 1);
  out.push_back(eval(sys.g, work, args, ledger, opt));
  args.resize(xs.size() + 2);
  for (std::uint64_t u = 0; u < steps; ++u) {
    args[xs.size()] = out.back();
    args[xs.size() + 1] = Nat(static_cast<unsigned long>(u));
    out.push_back(eval(sys.h, work, args, ledger, opt));
  }
  return out;
}

}  // namespace

Nat pbrpl_iterate(const PbrplSystem& sys, std::span<const Oracle> oracles,
                  std::span<const Nat> xs, const Nat& y, const EvalOptions& options) {
  return trajectory(sys, oracles, xs, to_u64(y), options).back();
}

PbrplReport validate_pbrpl(const PbrplSystem& sys, std::span<const PbrplSample> domain,
                           std::uint64_t max_p) {
  PbrplReport report;
  report.samples = domain.size();
  const std::size_t n = domain.size();
  std::vector<std::uint64_t> ps(n);
  std::vector<Nat> qs(n);
  std::uint64_t horizon = 0;
  for (std::size_t s = 0; s < n; ++s) {
    SopEnv env = SopEnv::from_args(domain[s].xs, pointers(domain[s].oracles), NormMethod::Table);
    Nat p = sop_eval(sys.p, env);
    if (p > max_p) throw SearchSpaceTooLarge(to_string(p), max_p);
    ps[s] = p.get_ui();
    qs[s] = sop_eval(sys.q, env);
    horizon = std::max(horizon, 2 * ps[s] + 4);
  }
  report.horizon = Nat(static_cast<unsigned long>(horizon));

  std::vector<std::vector<Nat>> traj(n);
  for (std::size_t s = 0; s < n; ++s) {
    traj[s] = trajectory(sys, domain[s].oracles, domain[s].xs, horizon, {});
    const auto& t = traj[s];
    for (std::uint64_t y = 0; y <= ps[s]; ++y)
      if (bit_length(t[y]) > qs[s])
        report.violations.push_back({"bound", s, s, Nat(static_cast<unsigned long>(y)),
                                     "|" + to_string(t[y]) + "| > " + to_string(qs[s])});
    for (std::uint64_t y = ps[s]; y <= 2 * ps[s] + 4; ++y)
      if (t[y] != t[ps[s]]) {
        report.violations.push_back({"stabilization", s, s, Nat(static_cast<unsigned long>(y)),
                                     to_string(t[y]) + " != " + to_string(t[ps[s]])});
        break;
      }
  }

  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t r = 0; r < n; ++r) {
      if (r == s || domain[r].xs != domain[s].xs) continue;
      ++report.locality_pairs;
      const auto& a = traj[s];
      const auto& b = traj[r];
      if (!std::equal(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(ps[s] + 1), b.begin()))
        continue;
      for (std::uint64_t y = ps[s] + 1; y <= horizon; ++y)
        if (a[y] != b[y]) {
          report.violations.push_back({"locality", s, r, Nat(static_cast<unsigned long>(y)),
                                       to_string(a[y]) + " != " + to_string(b[y])});
          break;
        }
    }
  }
  return report;
}

namespace {

TermPtr term_arg(const SExpr& e, std::string_view key) {
  const SExpr* v = keyword_arg(e, key);
  if (!v) throw ParseError("missing " + std::string(key), e.line);
  return parse_term(*v);
}

SopPtr sop_arg(const SExpr& e, std::string_view key) {
  const SExpr* v = keyword_arg(e, key);
  if (!v) throw ParseError("missing " + std::string(key), e.line);
  return parse_sop(*v);
}

void expect_head(const SExpr& e, std::string_view head) {
  if (e.head() != head)
    throw ParseError("expected a (" + std::string(head) + " ...) scheme", e.line);
}

}  // namespace

MlrnSystem parse_mlrn(const SExpr& e) {
  expect_head(e, "mlrn");
  MlrnSystem sys;
  std::vector<std::string> keys;
  for (std::size_t i = 1; keyword_arg(e, ":g" + std::to_string(i)); ++i) {
    const std::string n = std::to_string(i);
    sys.g.push_back(term_arg(e, ":g" + n));
    sys.h.push_back(term_arg(e, ":h" + n));
    sys.k.push_back(term_arg(e, ":k" + n));
    for (const char* p : {":g", ":h", ":k"}) keys.push_back(p + n);
  }
  if (sys.g.empty()) throw ParseError("mlrn needs :g1, :h1 and :k1", e.line);
  std::vector<std::string_view> allowed(keys.begin(), keys.end());
  check_keywords(e, allowed);
  return sys;
}

PbrnSystem parse_pbrn(const SExpr& e) {
  expect_head(e, "pbrn");
  check_keywords(e, {":g", ":h", ":q"});
  return PbrnSystem{term_arg(e, ":g"), term_arg(e, ":h"), sop_arg(e, ":q")};
}

PbrplSystem parse_pbrpl(const SExpr& e) {
  expect_head(e, "pbrpl");
  check_keywords(e, {":g", ":h", ":p", ":q"});
  return PbrplSystem{term_arg(e, ":g"), term_arg(e, ":h"), sop_arg(e, ":p"), sop_arg(e, ":q")};
}

}  // namespace bfflab
