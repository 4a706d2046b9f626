#include "bfflab/otm.hpp"

#include <algorithm>
#include <regex>
#include <set>
#include <sstream>

#include "bfflab/sexpr.hpp"

namespace bfflab {

namespace {

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool valid_symbol(char c) { return c == kBlank || c == '0' || c == '1' || c == '#' || c == kAny; }

bool overlaps(const std::string& a, const std::string& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != kAny && b[i] != kAny && a[i] != b[i]) return false;
  return true;
}

}  // namespace

MachineError::MachineError(std::vector<std::string> errors)
    : Error("MachineError", join(errors, "\n")), errors_(std::move(errors)) {}

std::optional<std::size_t> Machine::tape(TapeKind kind, std::size_t oracle) const {
  for (std::size_t i = 0; i < tapes.size(); ++i)
    if (tapes[i].kind == kind &&
        ((kind != TapeKind::OracleIn && kind != TapeKind::OracleOut) || tapes[i].oracle == oracle))
      return i;
  return std::nullopt;
}

const Transition* Machine::find(std::size_t state, std::string_view symbols) const {
  if (state >= by_state.size()) return nullptr;
  for (std::size_t idx : by_state[state]) {
    const Transition& t = delta[idx];
    bool match = true;
    for (std::size_t i = 0; i < symbols.size() && match; ++i)
      match = t.reads[i] == kAny || t.reads[i] == symbols[i];
    if (match) return &t;
  }
  return nullptr;
}

Machine parse_machine(std::string_view text) {
  Machine m;
  std::vector<std::string> errors;
  auto err = [&](int line, const std::string& what) {
    errors.push_back("line " + std::to_string(line) + ": " + what);
  };

  std::map<std::string, std::size_t> state_index;
  struct Pending {
    int line;
    std::vector<std::string> names;
  };
  std::optional<Pending> init, halt, states, tapes;
  struct PendingQuery {
    int line;
    std::string oracle, state, resume;
  };
  std::vector<PendingQuery> queries;
  struct PendingDelta {
    int line;
    std::string state, reads, writes, moves, next;
  };
  std::vector<PendingDelta> delta;

  static const std::regex transition_re(
      R"(^\(\s*([^,\s]+)\s*,([^)]*)\)\s*->\s*\(([^,]*),([^,]*),\s*([^,\s)]+)\s*\)$)");
  static const std::regex query_re(R"(^query\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$)");

  bool in_delta = false;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    if (auto c = raw.find_first_of(";"); c != std::string::npos) raw.resize(c);
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '(') {
      if (!in_delta) {
        err(line_no, "transition outside the delta: section");
        continue;
      }
      std::smatch mt;
      if (!std::regex_match(line, mt, transition_re)) {
        err(line_no, "malformed transition '" + line + "'");
        continue;
      }
      delta.push_back({line_no, mt[1], mt[2], mt[3], mt[4], mt[5]});
      continue;
    }
    std::smatch mq;
    if (std::regex_match(line, mq, query_re)) {
      queries.push_back({line_no, mq[1], mq[2], mq[3]});
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      err(line_no, "expected a section header, got '" + line + "'");
      continue;
    }
    const std::string key = trim(line.substr(0, colon));
    Pending value{line_no, words(line.substr(colon + 1))};
    if (key == "states") states = value;
    else if (key == "tapes") tapes = value;
    else if (key == "init") init = value;
    else if (key == "halt") halt = value;
    else if (key == "inputs") {
      if (value.names.size() != 1 || value.names[0].find_first_not_of("0123456789") != std::string::npos)
        err(line_no, "inputs: takes one count");
      else
        m.inputs = std::stoul(value.names[0]);
    } else if (key == "delta") {
      in_delta = true;
      if (!value.names.empty()) err(line_no, "transitions start on the line after delta:");
    } else {
      err(line_no, "unknown section '" + key + "'");
    }
  }

  if (!states) err(line_no, "missing states: section");
  if (!tapes) err(line_no, "missing tapes: section");
  if (!init) err(line_no, "missing init: section");
  if (!halt) err(line_no, "missing halt: section");
  if (!errors.empty()) throw MachineError(errors);

  for (const auto& s : states->names) {
    if (state_index.count(s)) err(states->line, "duplicate state '" + s + "'");
    state_index.emplace(s, m.states.size());
    m.states.push_back(s);
  }
  auto lookup = [&](int line, const std::string& s) -> std::optional<std::size_t> {
    auto it = state_index.find(s);
    if (it == state_index.end()) {
      err(line, "unknown state '" + s + "'");
      return std::nullopt;
    }
    return it->second;
  };

  std::set<std::size_t> oin, oout;
  for (const auto& t : tapes->names) {
    TapeSpec spec;
    if (t == "input") spec.kind = TapeKind::Input;
    else if (t == "work") spec.kind = TapeKind::Work;
    else if (t == "output") spec.kind = TapeKind::Output;
    else if (t.rfind("oin:", 0) == 0 || t.rfind("oout:", 0) == 0) {
      const bool is_in = t[1] == 'i';
      const std::string idx = t.substr(is_in ? 4 : 5);
      if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos) {
        err(tapes->line, "bad oracle tape '" + t + "'");
        continue;
      }
      spec.kind = is_in ? TapeKind::OracleIn : TapeKind::OracleOut;
      spec.oracle = std::stoul(idx);
      if (!(is_in ? oin : oout).insert(spec.oracle).second)
        err(tapes->line, "duplicate tape '" + t + "'");
    } else {
      err(tapes->line, "unknown tape kind '" + t + "'");
      continue;
    }
    m.tapes.push_back(spec);
  }
  auto count = [&](TapeKind k) {
    return std::count_if(m.tapes.begin(), m.tapes.end(),
                         [&](const TapeSpec& s) { return s.kind == k; });
  };
  if (count(TapeKind::Input) != 1) err(tapes->line, "exactly one input tape required");
  if (count(TapeKind::Output) != 1) err(tapes->line, "exactly one output tape required");
  if (oin != oout) err(tapes->line, "every oracle needs both an oin and an oout tape");
  m.oracles = oin.empty() ? 0 : *oin.rbegin() + 1;
  if (oin.size() != m.oracles) err(tapes->line, "oracle tapes must be numbered 0, 1, ...");

  if (init->names.size() != 1) err(init->line, "init: takes one state");
  else if (auto s = lookup(init->line, init->names[0])) m.initial = *s;
  m.halting.assign(m.states.size(), false);
  for (const auto& h : halt->names)
    if (auto s = lookup(halt->line, h)) m.halting[*s] = true;

  for (const auto& q : queries) {
    if (q.oracle.find_first_not_of("0123456789") != std::string::npos) {
      err(q.line, "bad oracle index '" + q.oracle + "'");
      continue;
    }
    const std::size_t j = std::stoul(q.oracle);
    if (!oin.count(j)) err(q.line, "query on oracle " + q.oracle + " without its tapes");
    auto s = lookup(q.line, q.state);
    auto r = lookup(q.line, q.resume);
    if (!s || !r) continue;
    if (m.halting[*s]) err(q.line, "a halting state cannot be a query state");
    if (!m.queries.emplace(*s, QueryState{j, *r}).second)
      err(q.line, "state '" + q.state + "' is already a query state");
  }

  const std::size_t n = m.tapes.size();
  m.by_state.assign(m.states.size(), {});
  for (const auto& d : delta) {
    Transition t;
    t.line = d.line;
    auto reads = words(d.reads), writes = words(d.writes), moves = words(d.moves);
    if (reads.size() != n || writes.size() != n || moves.size() != n) {
      err(d.line, "expected " + std::to_string(n) + " reads, writes and moves");
      continue;
    }
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (reads[i].size() != 1 || !valid_symbol(reads[i][0]) || writes[i].size() != 1 ||
          !valid_symbol(writes[i][0])) {
        err(d.line, "bad symbol on tape " + std::to_string(i));
        ok = false;
        continue;
      }
      t.reads += reads[i][0];
      t.writes += writes[i][0];
      if (moves[i] == "L") t.moves.push_back(Move::Left);
      else if (moves[i] == "R") t.moves.push_back(Move::Right);
      else if (moves[i] == "S") t.moves.push_back(Move::Stay);
      else {
        err(d.line, "bad move '" + moves[i] + "'");
        ok = false;
      }
      const TapeKind k = m.tapes[i].kind;
      if (k == TapeKind::OracleOut && writes[i][0] != kAny) {
        err(d.line, "writes to the read-only oracle output tape " + std::to_string(i));
        ok = false;
      }
      if (k == TapeKind::Input && writes[i][0] != kAny) {
        err(d.line, "writes to the input tape");
        ok = false;
      }
      if (k == TapeKind::OracleIn && reads[i][0] != kAny) {
        err(d.line, "reads the write-only oracle input tape " + std::to_string(i));
        ok = false;
      }
    }
    auto s = lookup(d.line, d.state);
    auto nx = lookup(d.line, d.next);
    if (!ok || !s || !nx) continue;
    if (m.halting[*s]) err(d.line, "transition out of halting state '" + d.state + "'");
    if (m.queries.count(*s)) err(d.line, "transition out of query state '" + d.state + "'");
    t.state = *s;
    t.next = *nx;
    for (std::size_t other : m.by_state[*s])
      if (overlaps(m.delta[other].reads, t.reads))
        err(d.line, "nondeterministic: overlaps the transition on line " +
                        std::to_string(m.delta[other].line));
    m.by_state[*s].push_back(m.delta.size());
    m.delta.push_back(std::move(t));
  }

  if (!errors.empty()) throw MachineError(errors);
  return m;
}

Machine load_machine(const std::string& path) { return parse_machine(read_file(path)); }

void Tape::write(char c) {
  if (c == kAny) return;
  if (head >= cells.size()) {
    if (c == kBlank) return;
    cells.resize(head + 1, kBlank);
  }
  cells[head] = c;
}

std::size_t Tape::used() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(),
                                                [](char c) { return c != kBlank; }));
}

std::string to_binary(const Nat& x) { return x == 0 ? "" : x.get_str(2); }

std::optional<Nat> read_numeral(const std::string& cells) {
  const auto last = cells.find_last_not_of(kBlank);
  if (last == std::string::npos) return Nat(0);
  Nat v = 0;
  for (std::size_t i = 0; i <= last; ++i) {
    if (cells[i] != '0' && cells[i] != '1') return std::nullopt;
    v = v * 2 + (cells[i] - '0');
  }
  return v;
}

Configuration initial_configuration(const Machine& m, std::span<const Nat> inputs) {
  Configuration c;
  c.state = m.initial;
  c.tapes.resize(m.tapes.size());
  std::string in;
  for (std::size_t i = 0; i < inputs.size(); ++i) in += (i ? "#" : "") + to_binary(inputs[i]);
  if (auto t = m.tape(TapeKind::Input)) c.tapes[*t].cells = in;
  c.max_oracle_input.assign(m.oracles, 0);
  c.halted = m.halting[c.state];
  return c;
}

void step(const Machine& m, Configuration& c, std::span<Oracle> oracles,
          bool strict_oracle_input) {
  if (c.halted) return;
  if (auto q = m.queries.find(c.state); q != m.queries.end()) {
    const std::size_t j = q->second.oracle;
    if (j >= oracles.size()) throw RankError("oracle " + std::to_string(j) + " not supplied");
    Tape& in = c.tapes[*m.tape(TapeKind::OracleIn, j)];
    Tape& out = c.tapes[*m.tape(TapeKind::OracleOut, j)];
    QueryRecord rec;
    rec.oracle = j;
    auto x = read_numeral(in.cells);
    if (!x) {
      if (strict_oracle_input) throw ParseError("malformed oracle input '" + in.cells + "'");
      rec.malformed = true;
      ++c.malformed_inputs;
      x = Nat(0);
    }
    rec.x = *x;
    rec.answer = oracles[j].query(*x);
    out.cells = rec.answer == 0 ? "0" : to_binary(rec.answer);
    in.cells.clear();
    in.head = 0;
    out.head = 0;
    const std::size_t bits = bit_length(rec.answer);
    ++c.steps;
    ++c.queries;
    c.length_cost += bits;
    c.answer_bits += bits;
    c.query_log.push_back(std::move(rec));
    c.state = q->second.resume;
    c.halted = m.halting[c.state];
    return;
  }
  std::string symbols;
  for (const auto& t : c.tapes) symbols += t.read();
  const Transition* t = m.find(c.state, symbols);
  if (!t) {
    c.halted = true;
    c.rejected = true;
    return;
  }
  for (std::size_t i = 0; i < c.tapes.size(); ++i) {
    Tape& tape = c.tapes[i];
    tape.write(t->writes[i]);
    if (t->moves[i] == Move::Right) ++tape.head;
    else if (t->moves[i] == Move::Left && tape.head > 0) --tape.head;
  }
  for (std::size_t j = 0; j < m.oracles; ++j)
    c.max_oracle_input[j] =
        std::max(c.max_oracle_input[j], c.tapes[*m.tape(TapeKind::OracleIn, j)].cells.size());
  ++c.steps;
  ++c.length_cost;
  c.state = t->next;
  c.halted = m.halting[c.state];
}

RunResult run(const Machine& m, std::span<Oracle> oracles, std::span<const Nat> inputs,
              std::uint64_t fuel, const StepMonitor& monitor) {
  Configuration c = initial_configuration(m, inputs);
  std::vector<std::size_t> peak(m.tapes.size(), 0);
  auto track = [&] {
    for (std::size_t i = 0; i < c.tapes.size(); ++i)
      peak[i] = std::max(peak[i], c.tapes[i].cells.size());
  };
  track();
  while (!c.halted) {
    if (c.steps >= fuel) throw FuelExhausted();
    const bool query = m.queries.count(c.state) > 0;
    step(m, c, oracles);
    track();
    if (monitor) monitor(c, query);
  }
  RunResult r;
  const std::string& out = c.tapes[*m.tape(TapeKind::Output)].cells;
  std::string prefix = out.substr(0, std::min(out.size(), out.find_first_not_of("01")));
  r.output = prefix.empty() ? Nat(0) : Nat(prefix, 2);
  r.t_unit = c.steps;
  r.t_len = c.length_cost;
  r.queries = c.queries;
  r.answer_bits = c.answer_bits;
  r.peak_lengths = std::move(peak);
  r.malformed_inputs = c.malformed_inputs;
  r.rejected = c.rejected;
  r.query_log = std::move(c.query_log);
  return r;
}

TimeBoundReport check_time_bound(const Machine& m, const SopPtr& p,
                                 std::span<const OtmSample> samples, NormMethod method,
                                 std::uint64_t fuel) {
  TimeBoundReport report;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    std::vector<Oracle> oracles = samples[s].oracles;
    std::vector<const Oracle*> fs;
    for (const auto& f : samples[s].oracles) fs.push_back(&f);
    SopEnv env = SopEnv::from_args(samples[s].inputs, fs, method);
    const Configuration start = initial_configuration(m, samples[s].inputs);
    const std::size_t input_len = start.tapes[*m.tape(TapeKind::Input)].cells.size();
    std::vector<OtmViolation> found;
    auto flag = [&](const std::string& kind, std::uint64_t t, const std::string& detail) {
      found.push_back({s, kind, t, detail});
    };
    try {
      auto monitor = [&](const Configuration& c, bool was_query) {
        for (std::size_t i = 0; i < m.tapes.size(); ++i) {
          const TapeKind k = m.tapes[i].kind;
          const std::size_t used = c.tapes[i].used();
          if ((k == TapeKind::Work || k == TapeKind::OracleIn) && used > c.steps + input_len)
            flag(k == TapeKind::Work ? "work-tape" : "oracle-input", c.steps,
                 "tape " + std::to_string(i) + " holds " + std::to_string(used) + " symbols");
          if (k == TapeKind::OracleOut) {
            const std::size_t j = m.tapes[i].oracle;
            Nat cap = env.norm_of(j, Nat(static_cast<unsigned long>(c.max_oracle_input[j])));
            if (cap < 1) cap = 1;
            if (c.tapes[i].cells.size() > cap)
              flag("oracle-output", c.steps,
                   "tape " + std::to_string(i) + " holds " +
                       std::to_string(c.tapes[i].cells.size()) + " symbols, bound " +
                       to_string(cap));
          }
        }
        if (was_query) {
          const QueryRecord& q = c.query_log.back();
          const Tape& in = c.tapes[*m.tape(TapeKind::OracleIn, q.oracle)];
          const Tape& out = c.tapes[*m.tape(TapeKind::OracleOut, q.oracle)];
          if (!in.cells.empty() || in.head != 0 || out.head != 0)
            flag("protocol", c.steps, "oracle tapes not reset after query");
        }
      };
      RunResult r = run(m, oracles, samples[s].inputs, fuel, monitor);
      Nat bound = sop_eval(p, env);
      if (Nat(static_cast<unsigned long>(r.t_unit)) > bound)
        flag("time", r.t_unit, "T_unit " + std::to_string(r.t_unit) + " > " + to_string(bound));
      report.max_t_unit = std::max(report.max_t_unit, r.t_unit);
    } catch (const NormCapExceeded&) {
      ++report.skipped;
      continue;
    }
    ++report.checked;
    report.violations.insert(report.violations.end(), found.begin(), found.end());
  }
  return report;
}

}  // namespace bfflab
