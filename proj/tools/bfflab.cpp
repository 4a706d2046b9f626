#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bfflab/bounds.hpp"
#include "bfflab/errors.hpp"
#include "bfflab/eval.hpp"
#include "bfflab/gen.hpp"
#include "bfflab/otm.hpp"
#include "bfflab/schemes.hpp"
#include "bfflab/selftest.hpp"
#include "bfflab/sop.hpp"
#include "bfflab/witness.hpp"

using namespace bfflab;

namespace {

/// A check found what it was looking for: exit code 1.
struct Violation {
  std::string message;
};

/// Bad input that the library itself does not flag: exit code 2.
struct Usage {
  std::string message;
};

/// Structured output: sorted key<TAB>value lines in report mode, the
/// `main` value (or the given lines) otherwise.
class Output {
 public:
  explicit Output(bool report) : report_(report) {}

  void set(const std::string& key, const std::string& value) { fields_[key] = value; }
  void set(const std::string& key, std::uint64_t value) { set(key, std::to_string(value)); }
  void line(const std::string& text) { lines_.push_back(text); }

  void flush() const {
    if (report_) {
      for (const auto& [k, v] : fields_) std::cout << k << '\t' << v << '\n';
      return;
    }
    for (const auto& l : lines_) std::cout << l << '\n';
  }

 private:
  bool report_;
  std::map<std::string, std::string> fields_;
  std::vector<std::string> lines_;
};

std::vector<Nat> nats(const std::vector<std::string>& texts) {
  std::vector<Nat> out;
  for (const auto& t : texts) out.push_back(parse_nat(t));
  return out;
}

std::vector<Oracle> oracles(const std::vector<std::string>& paths) {
  std::vector<Oracle> out;
  for (const auto& p : paths) out.push_back(load_oracle(p));
  return out;
}

std::vector<const Oracle*> pointers(const std::vector<Oracle>& fs) {
  std::vector<const Oracle*> out;
  for (const auto& f : fs) out.push_back(&f);
  return out;
}

std::pair<std::uint64_t, std::uint64_t> range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Usage{"expected LO:HI, got '" + text + "'"};
  return {to_u64(parse_nat(text.substr(0, colon))), to_u64(parse_nat(text.substr(colon + 1)))};
}

struct TableSpec {
  std::uint64_t lo = 0, hi = 15, max = 255;
};

TableSpec table_spec(const std::string& text) {
  std::vector<std::uint64_t> parts;
  std::stringstream in(text);
  for (std::string p; std::getline(in, p, ':');) parts.push_back(to_u64(parse_nat(p)));
  if (parts.size() != 3) throw Usage{"expected LO:HI:MAX, got '" + text + "'"};
  return {parts[0], parts[1], parts[2]};
}

NormMethod norm_method(const std::string& name) {
  if (name == "brute") return NormMethod::BruteForce;
  if (name == "table") return NormMethod::Table;
  throw Usage{"unknown norm method '" + name + "'"};
}

std::string join(const std::vector<Nat>& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : " ") + to_string(x);
  return s;
}

struct Common {
  std::vector<std::string> oracle_files;
  std::vector<std::string> args;
  bool report = false;
};

void add_common(CLI::App* cmd, Common& c, bool with_args = true) {
  cmd->add_option("--oracle", c.oracle_files, "Oracle file for f0, f1, ... (repeatable)")
      ->check(CLI::ExistingFile);
  if (with_args) cmd->add_option("--args", c.args, "Number arguments x0 x1 ...");
  cmd->add_flag("--report", c.report, "Print sorted key<TAB>value lines");
}

// eval

struct EvalCmd {
  Common c;
  std::string term;
  bool strict = false;
  std::uint64_t fuel = std::uint64_t{1} << 32;
  bool show_rank = false;
  std::vector<std::size_t> check_rank;
};

void run_eval(const EvalCmd& e) {
  TermPtr t = load_term(e.term);
  Output out(e.c.report);
  if (!e.check_rank.empty()) {
    if (e.check_rank.size() != 2) throw Usage{"--check-rank takes K L"};
    auto issues = validate_term(t, Rank{e.check_rank[0], e.check_rank[1]});
    out.set("issues", issues.size());
    for (std::size_t i = 0; i < issues.size(); ++i) {
      out.set("issue." + std::to_string(i), issues[i].message());
      out.line(issues[i].message());
    }
    if (issues.empty()) out.line("ok");
    out.flush();
    if (!issues.empty()) throw Violation{};
    return;
  }
  if (e.show_rank) {
    out.set("rank", to_string(rank(t)));
    out.line(to_string(rank(t)));
    out.flush();
    return;
  }
  auto fs = oracles(e.c.oracle_files);
  auto args = nats(e.c.args);
  CostLedger ledger;
  EvalOptions opt;
  opt.strict = e.strict;
  opt.fuel = e.fuel;
  std::uint64_t clamps = 0;
  opt.on_recursion = [&](const RecursionEvent& ev) {
    if (ev.raw != ev.value) ++clamps;
  };
  Nat v = eval(t, fs, args, ledger, opt);
  out.set("value", to_string(v));
  out.set("builtin_steps", ledger.builtin_steps);
  out.set("oracle_queries", ledger.oracle_queries);
  out.set("kc_oracle_cost", to_string(ledger.kc_oracle_cost));
  out.set("peak_value_bits", ledger.peak_value_bits);
  out.set("recursion_unfoldings", ledger.recursion_unfoldings);
  out.set("clamp_events", clamps);
  out.line(to_string(v));
  out.flush();
}

// bound

struct BoundCmd {
  Common c;
  std::string term;
  std::string bound_file;
  std::size_t samples = 200;
  std::uint64_t seed = 1;
  std::string table = "0:31:63";
  std::uint64_t max_arg = 255;
  std::string norm = "brute";
};

void run_bound_infer(const BoundCmd& b) {
  SopPtr p = infer_bound(load_term(b.term));
  Output out(b.c.report);
  out.set("bound", format_sop(p));
  out.set("depth", depth(p));
  out.line(format_sop(p));
  out.flush();
}

void run_bound_check(const BoundCmd& b) {
  TermPtr t = load_term(b.term);
  SopPtr p = b.bound_file.empty() ? infer_bound(t) : load_sop(b.bound_file);
  const Rank r = rank(t);
  std::vector<Sample> samples;
  if (!b.c.args.empty() || !b.c.oracle_files.empty()) {
    samples.push_back({oracles(b.c.oracle_files), nats(b.c.args)});
  } else {
    const TableSpec ts = table_spec(b.table);
    gen::Rng rng(b.seed);
    for (std::size_t s = 0; s < b.samples; ++s) {
      Sample smp;
      for (std::size_t j = 0; j < r.functions; ++j)
        smp.oracles.push_back(gen::table_oracle(rng, ts.lo, ts.hi, ts.max));
      for (std::size_t i = 0; i < r.numbers; ++i) smp.xs.push_back(Nat(gen::uniform(rng, 0, b.max_arg)));
      samples.push_back(std::move(smp));
    }
  }
  auto rep = check_majorization(t, p, samples, norm_method(b.norm));
  Output out(b.c.report);
  out.set("bound", format_sop(p));
  out.set("checked", rep.checked);
  out.set("skipped", rep.skipped);
  out.set("violations", rep.violations.size());
  for (std::size_t i = 0; i < rep.violations.size(); ++i) {
    const auto& v = rep.violations[i];
    const std::string text = "sample " + std::to_string(v.sample) + ": |" + to_string(v.value) +
                             "| > " + to_string(v.bound);
    out.set("violation." + std::to_string(i), text);
    out.line("violation: " + text);
  }
  if (rep.violations.empty())
    out.line("ok: " + std::to_string(rep.checked) + " samples, " + std::to_string(rep.skipped) +
             " skipped");
  out.flush();
  if (!rep.violations.empty()) throw Violation{};
}

// sop

struct SopCmd {
  Common c;
  std::string file;
  std::vector<std::string> lengths;
  std::string at;
  std::string norm = "brute";
  std::string u = "0:255";
  std::vector<std::string> replace;
  std::uint64_t cap = 1u << 20;
};

void run_sop_depth(const SopCmd& s) {
  SopPtr p = load_sop(s.file);
  Output out(s.c.report);
  out.set("depth", depth(p));
  out.line(std::to_string(depth(p)));
  out.flush();
}

void run_sop_regularize(const SopCmd& s) {
  SopPtr p = load_sop(s.file);
  SopPtr r = regularize(p);
  Output out(s.c.report);
  out.set("regular", format_sop(r));
  out.set("depth", depth(r));
  out.set("changed", same_sop(p, r) ? "false" : "true");
  out.line(format_sop(r));
  out.flush();
}

void run_sop_regular(const SopCmd& s) {
  SopPtr p = load_sop(s.file);
  Output out(s.c.report);
  const std::string v = is_regular(p) ? "true" : "false";
  out.set("regular", v);
  out.line(v);
  out.flush();
}

SopEnv env_of(const SopCmd& s, const std::vector<Oracle>& fs) {
  const NormMethod m = norm_method(s.norm);
  if (!s.lengths.empty()) return SopEnv(nats(s.lengths), pointers(fs), m);
  return SopEnv::from_args(nats(s.c.args), pointers(fs), m);
}

void run_sop_eval(const SopCmd& s) {
  SopPtr p = load_sop(s.file);
  auto fs = oracles(s.c.oracle_files);
  Nat v = sop_eval(p, env_of(s, fs));
  Output out(s.c.report);
  out.set("value", to_string(v));
  out.line(to_string(v));
  out.flush();
}

void run_sop_norm(const SopCmd& s) {
  if (s.c.oracle_files.size() != 1) throw Usage{"sop norm takes exactly one --oracle"};
  Oracle f = load_oracle(s.c.oracle_files[0]);
  const Nat x = parse_nat(s.at);
  Nat v = norm_method(s.norm) == NormMethod::Table ? table_norm(f, x)
                                                   : norm(f, x, default_norm_cap());
  Output out(s.c.report);
  out.set("norm", to_string(v));
  out.line(to_string(v));
  out.flush();
}

WitnessTerms witnesses(const SopCmd& s, const SopPtr& p) {
  WitnessTerms w = witness_terms(p, s.c.args.empty() ? 0 : s.c.args.size());
  if (s.replace.size() % 2 != 0) throw Usage{"--replace takes INDEX TERM pairs"};
  for (std::size_t i = 0; i < s.replace.size(); i += 2) {
    const auto idx = to_u64(parse_nat(s.replace[i]));
    if (idx >= w.terms.size()) throw Usage{"no witness term t" + s.replace[i]};
    w.terms[idx] = parse_term(s.replace[i + 1]);
  }
  return w;
}

void run_sop_witness(const SopCmd& s) {
  SopPtr p = load_sop(s.file);
  WitnessTerms w = witnesses(s, p);
  Output out(s.c.report);
  for (std::size_t i = 0; i < w.terms.size(); ++i) {
    out.set("t" + std::to_string(i), format_term(w.terms[i]));
    out.line("t" + std::to_string(i) + "\t" + format_term(w.terms[i]));
  }
  for (std::size_t m = 0; m < w.nodes.size(); ++m)
    out.set("z" + std::to_string(m + 1), format_sop(w.nodes[m]));
  out.flush();
}

void run_sop_witness_check(const SopCmd& s) {
  SopPtr p = load_sop(s.file);
  WitnessTerms w = witnesses(s, p);
  auto fs = oracles(s.c.oracle_files);
  auto xs = nats(s.c.args);
  auto [lo, hi] = range(s.u);
  auto rep = witness_check(p, w, fs, xs, Nat(lo), Nat(hi), s.cap, norm_method(s.norm));
  Output out(s.c.report);
  out.set("p_value", to_string(rep.p_value));
  out.set("rhs_max", to_string(rep.rhs_max));
  out.set("tuples", rep.tuples);
  out.set("disagreements", rep.disagreements.size());
  for (std::size_t i = 0; i < rep.disagreements.size(); ++i) {
    const auto& d = rep.disagreements[i];
    const std::string text = "u=" + to_string(d.u) + " lhs=" + (d.lhs ? "true" : "false") +
                             " rhs=" + (d.rhs ? "true" : "false");
    out.set("disagreement." + std::to_string(i), text);
    out.line("disagreement: " + text);
  }
  if (rep.disagreements.empty()) out.line("agree on u in [" + s.u + "]");
  out.flush();
  if (!rep.disagreements.empty()) throw Violation{};
}

// scheme

struct SchemeCmd {
  Common c;
  std::string file;
  std::string domain;
  std::string u = "0";
  std::string y = "0";
  bool strict = false;
  std::string norm = "brute";
  std::uint64_t hard_cap = 1u << 16;
  std::uint64_t max_p = 1u << 12;
};

SExpr load_sexpr(const std::string& path) { return parse_sexpr(read_file(path)); }

void run_mlrn(const SchemeCmd& s) {
  MlrnSystem sys = parse_mlrn(load_sexpr(s.file));
  auto fs = oracles(s.c.oracle_files);
  auto alpha = nats(s.c.args);
  auto cb = mlrn_callbacks(sys, fs);
  auto f = compile_mlrn(cb, s.strict ? BoundMode::Strict : BoundMode::Clamp);
  const Nat u = parse_nat(s.u);
  auto values = f(u, alpha);
  auto k1 = [&](const Nat& x) { return cb.k(0, x, alpha, {}); };
  Output out(s.c.report);
  for (std::size_t i = 0; i < values.size(); ++i) out.set("F" + std::to_string(i + 1), to_string(values[i]));
  out.set("khat", to_string(mlrn_khat(k1, u)));
  out.set("kbar", to_string(mlrn_kbar(k1, u)));
  out.line(join(values));
  out.flush();
}

void run_pbrn(const SchemeCmd& s) {
  PbrnSystem sys = parse_pbrn(load_sexpr(s.file));
  auto fs = oracles(s.c.oracle_files);
  SchemeOptions opt;
  opt.mode = s.strict ? BoundMode::Strict : BoundMode::Clamp;
  opt.norm_method = norm_method(s.norm);
  Nat v = eval_pbrn(sys, fs, nats(s.c.args), parse_nat(s.y), opt);
  Output out(s.c.report);
  out.set("value", to_string(v));
  out.line(to_string(v));
  out.flush();
}

void run_pbrpl(const SchemeCmd& s) {
  PbrplSystem sys = parse_pbrpl(load_sexpr(s.file));
  auto fs = oracles(s.c.oracle_files);
  auto xs = nats(s.c.args);
  auto run = eval_pbrpl_clocked(sys, fs, xs, s.hard_cap);
  SopEnv env = SopEnv::from_args(xs, pointers(fs), NormMethod::Table);
  const Nat p = sop_eval(sys.p, env);
  Output out(s.c.report);
  out.set("value", to_string(run.value));
  out.set("steps", to_string(run.steps));
  out.set("p_star", to_string(run.p_star));
  out.set("p", to_string(p));
  out.set("unclocked", to_string(pbrpl_iterate(sys, fs, xs, p)));
  for (std::size_t j = 0; j < run.queried.size(); ++j)
    out.set("queried.f" + std::to_string(j), join(run.queried[j]));
  out.line(to_string(run.value));
  out.flush();
}

/// Domain file: one sample per line, oracle files (relative to the domain
/// file) then `|` then the numbers. `#` starts a comment.
std::vector<PbrplSample> load_domain(const std::string& path) {
  const auto dir = std::filesystem::path(path).parent_path();
  std::vector<PbrplSample> out;
  std::stringstream in(read_file(path));
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    line = line.substr(0, line.find('#'));
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto bar = line.find('|');
    if (bar == std::string::npos) throw ParseError("expected 'oracles | numbers'", line_no);
    PbrplSample s;
    std::stringstream fs(line.substr(0, bar)), xs(line.substr(bar + 1));
    for (std::string f; fs >> f;) s.oracles.push_back(load_oracle((dir / f).string()));
    for (std::string x; xs >> x;) s.xs.push_back(parse_nat(x));
    out.push_back(std::move(s));
  }
  return out;
}

void run_pbrpl_validate(const SchemeCmd& s) {
  PbrplSystem sys = parse_pbrpl(load_sexpr(s.file));
  std::vector<PbrplSample> domain = s.domain.empty() ? std::vector<PbrplSample>{} : load_domain(s.domain);
  auto rep = validate_pbrpl(sys, domain, s.max_p);
  Output out(s.c.report);
  out.set("samples", rep.samples);
  out.set("horizon", to_string(rep.horizon));
  out.set("locality_pairs", rep.locality_pairs);
  out.set("violations", rep.violations.size());
  for (std::size_t i = 0; i < rep.violations.size(); ++i) {
    const auto& v = rep.violations[i];
    std::string text = v.condition + " sample " + std::to_string(v.sample);
    if (v.condition == "locality") text += "/" + std::to_string(v.other);
    text += " y=" + to_string(v.y) + ": " + v.detail;
    out.set("violation." + std::to_string(i), text);
    out.line("violation: " + text);
  }
  if (rep.ok()) out.line("ok: " + std::to_string(rep.samples) + " samples");
  out.flush();
  if (!rep.ok()) throw Violation{};
}

struct CodingCmd {
  bool report = false;
  std::vector<std::string> values;
  std::string max = "0";
  std::string get;
  std::string append;
  std::string certify;
};

void run_kstar(const CodingCmd& c) {
  if (c.values.size() != 1) throw Usage{"kstar takes K"};
  const Nat v = kstar(parse_nat(c.values[0]));
  Output out(c.report);
  out.set("kstar", to_string(v));
  out.line(to_string(v));
  out.flush();
}

void run_sqbd(const CodingCmd& c) {
  if (c.values.size() != 2) throw Usage{"sqbd takes A B"};
  const Nat v = sqbd(parse_nat(c.values[0]), parse_nat(c.values[1]));
  Output out(c.report);
  out.set("sqbd", to_string(v));
  out.line(to_string(v));
  out.flush();
}

/// Encodes the elements with width |max| + 2, optionally appends one more,
/// then prints element `get` or the whole sequence.
void run_seq(const CodingCmd& c) {
  const Nat a = parse_nat(c.max);
  SequenceCode code = seq::encode(nats(c.values), a);
  if (!c.append.empty()) code = seq::append(code, parse_nat(c.append));
  Output out(c.report);
  out.set("payload", to_string(code.payload));
  out.set("width", code.width);
  out.set("length", code.length);
  out.set("elements", join(seq::decode(code)));
  if (!c.get.empty()) {
    const Nat v = seq::get(code, to_u64(parse_nat(c.get)));
    out.set("get", to_string(v));
    out.line(to_string(v));
  } else {
    out.line(to_string(code.payload));
  }
  if (!c.certify.empty()) {
    const Nat bound = sqbd(a, parse_nat(c.certify));
    const bool ok = code.payload <= bound;
    out.set("sqbd", to_string(bound));
    out.set("certified", ok ? "true" : "false");
    out.line(ok ? "payload <= sqbd" : "payload > sqbd");
    out.flush();
    if (!ok) throw Violation{};
    return;
  }
  out.flush();
}

// otm

struct OtmCmd {
  Common c;
  std::string machine;
  std::string bound_file;
  std::uint64_t fuel = 1u << 24;
  std::string inputs = "0:255";
  std::size_t tables = 0;
  std::string table = "0:15:255";
  std::uint64_t seed = 1;
  std::string norm = "table";
  std::vector<std::string> input;
  std::string cost;
  bool trace = false;
};

std::string tape_text(const Tape& t) {
  std::string cells = t.cells;
  while (!cells.empty() && cells.back() == kBlank) cells.pop_back();
  return cells.empty() ? "(blank)" : cells;
}

void run_otm(const OtmCmd& o) {
  Machine m = load_machine(o.machine);
  auto fs = oracles(o.c.oracle_files);
  if (fs.size() < m.oracles) throw Usage{"machine needs " + std::to_string(m.oracles) + " oracle(s)"};
  if (!o.cost.empty() && o.cost != "unit" && o.cost != "len")
    throw Usage{"--cost must be unit or len"};
  std::vector<std::string> args = o.c.args;
  args.insert(args.end(), o.input.begin(), o.input.end());
  Output out(o.c.report);
  StepMonitor monitor;
  if (o.trace) {
    monitor = [&](const Configuration& c, bool was_query) {
      if (!was_query) return;
      const auto& q = c.query_log.back();
      const std::size_t in = *m.tape(TapeKind::OracleIn, q.oracle);
      const std::size_t ans = *m.tape(TapeKind::OracleOut, q.oracle);
      const std::string n = std::to_string(c.queries - 1);
      const std::string text = "step " + std::to_string(c.steps) + " f" +
                               std::to_string(q.oracle) + "(" + to_string(q.x) + ") = " +
                               to_string(q.answer) + "; tape " + std::to_string(ans) + " " +
                               tape_text(c.tapes[ans]) + ", tape " + std::to_string(in) + " " +
                               tape_text(c.tapes[in]) + ", heads " +
                               std::to_string(c.tapes[ans].head) + " " +
                               std::to_string(c.tapes[in].head);
      out.set("query." + n, text);
      out.line("query " + n + ": " + text);
    };
  }
  auto r = run(m, fs, nats(args), o.fuel, monitor);
  out.set("output", to_string(r.output));
  out.set("oracles", m.oracles);
  out.set("t_unit", r.t_unit);
  out.set("t_len", r.t_len);
  out.set("queries", r.queries);
  out.set("answer_bits", r.answer_bits);
  out.set("malformed_inputs", r.malformed_inputs);
  out.set("rejected", r.rejected ? "true" : "false");
  for (std::size_t i = 0; i < r.peak_lengths.size(); ++i)
    out.set("peak_length.tape" + std::to_string(i), r.peak_lengths[i]);
  if (o.cost.empty())
    out.line(to_string(r.output));
  else
    out.line(to_string(r.output) + " " + std::to_string(o.cost == "unit" ? r.t_unit : r.t_len));
  out.flush();
}

void run_otm_check(const OtmCmd& o) {
  Machine m = load_machine(o.machine);
  SopPtr p = load_sop(o.bound_file);
  std::vector<std::vector<Oracle>> families;
  for (const auto& f : o.c.oracle_files) families.push_back({load_oracle(f)});
  if (o.tables > 0) {
    const TableSpec ts = table_spec(o.table);
    gen::Rng rng(o.seed);
    for (std::size_t i = 0; i < o.tables; ++i) {
      std::vector<Oracle> fs;
      for (std::size_t j = 0; j < m.oracles; ++j) fs.push_back(gen::table_oracle(rng, ts.lo, ts.hi, ts.max));
      families.push_back(std::move(fs));
    }
  }
  if (families.empty()) families.push_back(std::vector<Oracle>(m.oracles));
  std::vector<OtmSample> samples;
  if (!o.c.args.empty()) {
    for (const auto& fs : families) samples.push_back({fs, nats(o.c.args)});
  } else {
    auto [lo, hi] = range(o.inputs);
    for (const auto& fs : families)
      for (std::uint64_t x = lo; x <= hi; ++x) samples.push_back({fs, {Nat(x)}});
  }
  auto rep = check_time_bound(m, p, samples, norm_method(o.norm), o.fuel);
  Output out(o.c.report);
  out.set("checked", rep.checked);
  out.set("skipped", rep.skipped);
  out.set("max_t_unit", rep.max_t_unit);
  out.set("violations", rep.violations.size());
  for (std::size_t i = 0; i < rep.violations.size(); ++i) {
    const auto& v = rep.violations[i];
    std::string inputs;
    for (const auto& x : samples[v.sample].inputs) inputs += (inputs.empty() ? "" : ",") + to_string(x);
    const std::string text = v.kind + " sample " + std::to_string(v.sample) + " (input " + inputs +
                             ") step " + std::to_string(v.step) + ": " + v.detail;
    out.set("violation." + std::to_string(i), text);
    out.line("violation: " + text);
  }
  if (rep.violations.empty())
    out.line("ok: " + std::to_string(rep.checked) + " runs, max T_unit " +
             std::to_string(rep.max_t_unit));
  out.flush();
  if (!rep.violations.empty()) throw Violation{};
}

// selftest

struct SelftestCmd {
  std::vector<int> criteria;
  std::string fixtures;
  std::uint64_t seed = selftest::Options{}.seed;
};

void run_selftest(const SelftestCmd& s) {
  selftest::Options opt;
  opt.fixtures = s.fixtures;
  opt.seed = s.seed;
  std::vector<int> ids = s.criteria;
  if (ids.empty())
    for (int i = 1; i <= selftest::kCriteria; ++i) ids.push_back(i);
  bool ok = true;
  for (int id : ids) {
    if (id < 1 || id > selftest::kCriteria) throw Usage{"no criterion " + std::to_string(id)};
    auto o = selftest::run_criterion(id, opt);
    std::cout << selftest::format_outcome(o) << std::endl;
    ok = ok && o.passed;
  }
  if (!ok) throw Violation{};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bfflab: a workbench for type-2 feasible computation"};
  app.require_subcommand(1);

  EvalCmd ev;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a functional term");
  eval_cmd->add_option("term", ev.term, "Term file")->required()->check(CLI::ExistingFile);
  add_common(eval_cmd, ev.c);
  eval_cmd->add_flag("--strict", ev.strict, "Fail instead of clamping recursion values");
  eval_cmd->add_option("--fuel", ev.fuel, "Evaluation step budget");
  eval_cmd->add_flag("--rank", ev.show_rank, "Print the smallest rank instead of evaluating");
  eval_cmd->add_option("--check-rank", ev.check_rank, "Validate against rank K L")->expected(2);

  BoundCmd bd;
  auto* bound_cmd = app.add_subcommand("bound", "Majorizing second-order polynomials");
  bound_cmd->require_subcommand(1);
  auto* infer_cmd = bound_cmd->add_subcommand("infer", "Infer a bound for a term");
  infer_cmd->add_option("term", bd.term, "Term file")->required()->check(CLI::ExistingFile);
  infer_cmd->add_flag("--report", bd.c.report, "Print sorted key<TAB>value lines");
  auto* check_cmd = bound_cmd->add_subcommand(
      "check", "Check |t| <= B on one sample (--oracle/--args) or on random samples");
  check_cmd->add_option("term", bd.term, "Term file")->required()->check(CLI::ExistingFile);
  add_common(check_cmd, bd.c);
  check_cmd->add_option("--bound", bd.bound_file, "Bound file (default: inferred)")
      ->check(CLI::ExistingFile);
  check_cmd->add_option("--samples", bd.samples, "Random samples");
  check_cmd->add_option("--seed", bd.seed, "Random seed");
  check_cmd->add_option("--table", bd.table, "Random tables LO:HI:MAX");
  check_cmd->add_option("--max-arg", bd.max_arg, "Largest random number argument");
  check_cmd->add_option("--norm", bd.norm, "Norm method: brute or table");

  SopCmd sp;
  auto* sop_cmd = app.add_subcommand("sop", "Second-order polynomials");
  sop_cmd->require_subcommand(1);
  auto sop_sub = [&](const char* name, const char* help) {
    auto* c = sop_cmd->add_subcommand(name, help);
    c->add_option("sop", sp.file, "Polynomial file")->required()->check(CLI::ExistingFile);
    return c;
  };
  auto* depth_cmd = sop_sub("depth", "Nesting depth of |f|");
  depth_cmd->add_flag("--report", sp.c.report, "Print sorted key<TAB>value lines");
  auto* reg_cmd = sop_sub("regularize", "Regular polynomial majorizing the input");
  reg_cmd->add_flag("--report", sp.c.report, "Print sorted key<TAB>value lines");
  auto* regular_cmd = sop_sub("regular", "Whether the polynomial is regular");
  regular_cmd->add_flag("--report", sp.c.report, "Print sorted key<TAB>value lines");
  auto* sop_eval_cmd = sop_sub("eval", "Evaluate with --lengths or with the lengths of --args");
  add_common(sop_eval_cmd, sp.c);
  sop_eval_cmd->add_option("--lengths", sp.lengths, "|x0| |x1| ...");
  sop_eval_cmd->add_option("--norm", sp.norm, "Norm method: brute or table");
  auto* norm_cmd = sop_cmd->add_subcommand("norm", "|f|(x) for one oracle");
  add_common(norm_cmd, sp.c, false);
  norm_cmd->add_option("--at", sp.at, "x")->required();
  norm_cmd->add_option("--norm", sp.norm, "Norm method: brute or table");
  auto* wit_cmd = sop_sub("witness", "Witness terms t0 .. tn of a regular polynomial");
  wit_cmd->add_option("--args", sp.c.args, "Number arguments (sets the number count)");
  wit_cmd->add_flag("--report", sp.c.report, "Print sorted key<TAB>value lines");
  auto* wc_cmd = sop_sub("witness-check", "Check |u| <= P iff a witness tuple reaches u");
  add_common(wc_cmd, sp.c);
  wc_cmd->add_option("--u", sp.u, "Range LO:HI of u");
  wc_cmd->add_option("--replace", sp.replace, "INDEX TERM: replace witness term t_INDEX");
  wc_cmd->add_option("--cap", sp.cap, "Largest number of witness tuples");
  wc_cmd->add_option("--norm", sp.norm, "Norm method: brute or table");

  SchemeCmd sc;
  auto* scheme_cmd = app.add_subcommand("scheme", "Recursion schemes");
  scheme_cmd->require_subcommand(1);
  auto scheme_sub = [&](const char* name, const char* help) {
    auto* c = scheme_cmd->add_subcommand(name, help);
    c->add_option("system", sc.file, "Scheme file")->required()->check(CLI::ExistingFile);
    return c;
  };
  auto* mlrn_cmd = scheme_sub("mlrn-run", "Evaluate the MLRN construction at u (--args are alpha)");
  add_common(mlrn_cmd, sc.c);
  mlrn_cmd->add_option("--u", sc.u, "u");
  mlrn_cmd->add_flag("--strict", sc.strict, "Fail when a bound is exceeded");
  auto* pbrn_cmd = scheme_sub("pbrn-run", "Bounded recursion on notation at y");
  add_common(pbrn_cmd, sc.c);
  pbrn_cmd->add_option("--y", sc.y, "y");
  pbrn_cmd->add_flag("--strict", sc.strict, "Fail when the bound is exceeded");
  pbrn_cmd->add_option("--norm", sc.norm, "Norm method: brute or table");
  auto* pbrpl_cmd = scheme_sub("pbrpl-run", "Clocked polynomial-length recursion");
  add_common(pbrpl_cmd, sc.c);
  pbrpl_cmd->add_option("--hard-cap", sc.hard_cap, "Step limit");
  auto* val_cmd = scheme_sub("pbrpl-validate", "Check the side conditions on a finite domain");
  val_cmd->add_option("domain", sc.domain, "Domain file")->check(CLI::ExistingFile);
  val_cmd->add_option("--max-p", sc.max_p, "Largest P value");
  val_cmd->add_flag("--report", sc.c.report, "Print sorted key<TAB>value lines");

  CodingCmd cd;
  auto* kstar_cmd = scheme_cmd->add_subcommand("kstar", "K* = 2^|K| - 1");
  kstar_cmd->add_option("k", cd.values, "K")->required();
  kstar_cmd->add_flag("--report", cd.report, "Print sorted key<TAB>value lines");
  auto* sqbd_cmd = scheme_cmd->add_subcommand("sqbd", "SqBd(a, b) = (2b + 1) # (4(2a + 1)^2)");
  sqbd_cmd->add_option("ab", cd.values, "A B")->required();
  sqbd_cmd->add_flag("--report", cd.report, "Print sorted key<TAB>value lines");
  auto* seq_cmd = scheme_cmd->add_subcommand("seq", "Sequence codes");
  seq_cmd->add_option("elements", cd.values, "Elements");
  seq_cmd->add_option("--max", cd.max, "Bound a on the elements (width |a| + 2)");
  seq_cmd->add_option("--append", cd.append, "Element appended after encoding");
  seq_cmd->add_option("--get", cd.get, "Print element i");
  seq_cmd->add_option("--certify", cd.certify, "Check payload <= SqBd(max, B)");
  seq_cmd->add_flag("--report", cd.report, "Print sorted key<TAB>value lines");

  OtmCmd om;
  auto* otm_cmd = app.add_subcommand("otm", "Oracle Turing machines");
  otm_cmd->require_subcommand(1);
  auto* run_cmd = otm_cmd->add_subcommand("run", "Run a machine");
  run_cmd->add_option("machine", om.machine, "Machine file")->required();
  add_common(run_cmd, om.c);
  run_cmd->add_option("--fuel", om.fuel, "Step limit");
  run_cmd->add_option("--input", om.input, "Input numbers (appended to --args)");
  run_cmd->add_option("--cost", om.cost, "Also print T under this cost model: unit or len");
  run_cmd->add_flag("--trace", om.trace, "Print the tapes after each query");
  auto* otm_check_cmd =
      otm_cmd->add_subcommand("check", "Check T_unit <= P and the tape invariants");
  otm_check_cmd->add_option("machine", om.machine, "Machine file")->required();
  add_common(otm_check_cmd, om.c);
  otm_check_cmd->add_option("--bound", om.bound_file, "Bound file")->required()->check(CLI::ExistingFile);
  otm_check_cmd->add_option("--inputs", om.inputs, "Input range LO:HI (when --args is absent)");
  otm_check_cmd->add_option("--tables,--samples", om.tables, "Number of random oracle tables");
  otm_check_cmd->add_option("--table", om.table, "Random tables LO:HI:MAX");
  otm_check_cmd->add_option("--seed", om.seed, "Random seed");
  otm_check_cmd->add_option("--fuel", om.fuel, "Step limit per run");
  otm_check_cmd->add_option("--norm", om.norm, "Norm method: brute or table");

  SelftestCmd st;
  auto* self_cmd = app.add_subcommand("selftest", "Run the acceptance suites");
  self_cmd->add_option("--criterion", st.criteria, "Criteria to run (default: all)");
  self_cmd->add_option("--fixtures", st.fixtures, "Fixture directory");
  self_cmd->add_option("--seed", st.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (eval_cmd->parsed()) run_eval(ev);
    else if (infer_cmd->parsed()) run_bound_infer(bd);
    else if (check_cmd->parsed()) run_bound_check(bd);
    else if (depth_cmd->parsed()) run_sop_depth(sp);
    else if (reg_cmd->parsed()) run_sop_regularize(sp);
    else if (regular_cmd->parsed()) run_sop_regular(sp);
    else if (sop_eval_cmd->parsed()) run_sop_eval(sp);
    else if (norm_cmd->parsed()) run_sop_norm(sp);
    else if (wit_cmd->parsed()) run_sop_witness(sp);
    else if (wc_cmd->parsed()) run_sop_witness_check(sp);
    else if (mlrn_cmd->parsed()) run_mlrn(sc);
    else if (pbrn_cmd->parsed()) run_pbrn(sc);
    else if (pbrpl_cmd->parsed()) run_pbrpl(sc);
    else if (val_cmd->parsed()) run_pbrpl_validate(sc);
    else if (kstar_cmd->parsed()) run_kstar(cd);
    else if (sqbd_cmd->parsed()) run_sqbd(cd);
    else if (seq_cmd->parsed()) run_seq(cd);
    else if (run_cmd->parsed()) run_otm(om);
    else if (otm_check_cmd->parsed()) run_otm_check(om);
    else if (self_cmd->parsed()) run_selftest(st);
  } catch (const Violation& v) {
    if (!v.message.empty()) std::cerr << v.message << '\n';
    return 1;
  } catch (const Usage& u) {
    std::cerr << "error: " << u.message << '\n';
    return 2;
  } catch (const MachineError& e) {
    std::cerr << "error: machine file is not well formed\n";
    for (const auto& m : e.errors()) std::cerr << "  " << m << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const RankError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NotRegular& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << e.kind() << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}
