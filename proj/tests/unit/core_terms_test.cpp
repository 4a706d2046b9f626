#include <random>

#include "bfflab/errors.hpp"
#include "bfflab/eval.hpp"
#include "bfflab/gen.hpp"
#include "bfflab/term.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bfflab;

namespace {

Nat n(unsigned long v) { return Nat(v); }

Nat run(const std::string& src, std::vector<Nat> args, std::vector<Oracle> fs = {}) {
  return eval(parse_term(src), fs, args);
}

}  // namespace

TEST_CASE("builtins on small values") {
  CHECK(eval_builtin("smash", std::vector<Nat>{n(2), n(3)}) == 16);
  CHECK(eval_builtin(Builtin::Len, std::vector<Nat>{n(0)}) == 0);
  CHECK(eval_builtin(Builtin::Msp, std::vector<Nat>{n(13), n(2)}) == 3);
  CHECK(eval_builtin(Builtin::Msp, std::vector<Nat>{n(13), n(0)}) == 0);
  CHECK(eval_builtin(Builtin::Msp, std::vector<Nat>{n(13), n(7)}) == 13);
  CHECK(eval_builtin(Builtin::Monus, std::vector<Nat>{n(3), n(5)}) == 0);
  CHECK(eval_builtin(Builtin::CondLE, std::vector<Nat>{n(1), n(2), n(7), n(9)}) == 7);
  CHECK_THROWS_AS(eval_builtin(Builtin::Add, std::vector<Nat>{n(1)}), RankError);
}

TEST_CASE("builtins agree with word arithmetic") {
  for (std::uint64_t x = 0; x < 200; ++x) {
    CHECK(eval_builtin(Builtin::Len, std::vector<Nat>{n(x)}) == ref::len(x));
    for (std::uint64_t y = 0; y < 12; ++y) {
      CHECK(eval_builtin(Builtin::Msp, std::vector<Nat>{n(x), n(y)}) == ref::msp(x, y));
      CHECK(eval_builtin("smash", std::vector<Nat>{n(x), n(y)}) ==
            pow2(ref::len(x) * ref::len(y)));
    }
  }
}

TEST_CASE("validate_term") {
  CHECK(validate_term(term::zero(), {0, 1}).empty());
  CHECK(validate_term(parse_term("(comp smash (proj 2 1) (proj 2 2))"), {0, 2}).empty());

  auto bad = term::lrn(term::zero(), parse_term("(proj 2 1)"), parse_term("(proj 3 1)"),
                       parse_term("(proj 2 1)"));
  auto issues = validate_term(bad, {0, 2});
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].kind == RankIssue::Kind::RankMismatch);
  CHECK(issues[0].path == "/1");

  auto unknown = validate_term(term::ap(1), {1, 1});
  REQUIRE(unknown.size() == 1);
  CHECK(unknown[0].kind == RankIssue::Kind::UnknownOracleIndex);
  CHECK_FALSE(validate_term(term::zero(), {0, 2}).empty());
}

TEST_CASE("rank") {
  CHECK(rank(term::zero()) == Rank{0, 1});
  CHECK(rank(term::ap(0)) == Rank{1, 1});
  CHECK(rank(term::expand(term::ap(0), 1, 2)) == Rank{2, 3});
  CHECK(rank(parse_term("(comp smash (proj 2 1) (proj 2 2))")) == Rank{0, 2});
}

TEST_CASE("eval examples") {
  CHECK(run("(comp smash (proj 2 1) (proj 2 2))", {n(2), n(3)}) == 16);

  Oracle f;
  f.set(0, 5);
  CHECK(run("(ap 0)", {n(0)}, {f}) == 5);

  const std::string length = "(lrn1 :g 0 :h (comp add (x 1) 1) :k (comp add (x 0) 1))";
  CHECK(run(length, {n(13)}) == 4);
  for (std::uint64_t y = 0; y < 300; ++y) CHECK(run(length, {n(y)}) == ref::len(y));
}

TEST_CASE("Lrn splits on the low bit") {
  // F(0)=0, F(2y)=2F(y), F(2y+1)=2F(y)+1 reproduces y; bounded by y itself.
  auto t = parse_term(
      "(lrn :g 0 :h1 (comp s0 (x 1)) :h2 (comp s1 (x 1)) :k (x 0))");
  for (std::uint64_t y = 0; y < 300; ++y) CHECK(eval(t, {}, std::vector<Nat>{n(y)}) == y);
}

TEST_CASE("recursion values are clamped to K*") {
  // H doubles, K = y: F(y) <= 2^|y| - 1 at every prefix.
  auto t = parse_term("(lrn1 :g 1 :h (comp mul (x 1) 4) :k (x 0))");
  EvalOptions opt;
  std::vector<RecursionEvent> events;
  opt.on_recursion = [&](const RecursionEvent& e) { events.push_back(e); };
  CostLedger ledger;
  Nat v = eval(t, {}, std::vector<Nat>{n(37)}, ledger, opt);
  CHECK(bit_length(v) <= bit_length(n(37)));
  for (const auto& e : events) {
    CHECK(bit_length(e.value) <= bit_length(e.bound));
    CHECK(e.value == std::min(e.raw, kstar(e.bound)));
  }
  opt.strict = true;
  CHECK_THROWS_AS(eval(t, {}, std::vector<Nat>{n(37)}, ledger, opt), BoundViolation);
}

TEST_CASE("fuel") {
  EvalOptions opt;
  opt.fuel = 3;
  CostLedger ledger;
  CHECK_THROWS_AS(eval(parse_term("(lrn1 :g 0 :h (x 1) :k (x 0))"), {},
                       std::vector<Nat>{n(255)}, ledger, opt),
                  FuelExhausted);
}

TEST_CASE("kstar equivalence on a grid") {
  for (std::uint64_t f = 0; f < 300; ++f)
    for (std::uint64_t k = 0; k < 300; ++k)
      CHECK((f <= ref::kstar(k)) == (ref::len(f) <= ref::len(k)));
  CHECK(kstar(n(5)) == 7);
  CHECK(kstar(n(0)) == 0);
}

TEST_CASE("term text round trip") {
  gen::Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    auto t = gen::random_term(rng, {1, 2}, {3, 7});
    CHECK(format_term(parse_term(format_term(t))) == format_term(t));
    CHECK(validate_term(t, {1, 2}).empty());
  }
}

TEST_CASE("determinism, ledger and query-log locality") {
  gen::Rng rng(11);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    auto t = gen::random_term(rng, {1, 2}, {3, 7});
    std::vector<Nat> xs{n(gen::uniform(rng, 0, 255)), n(gen::uniform(rng, 0, 255))};
    std::vector<Oracle> fs{gen::table_oracle(rng, 0, 15, 255, 1)};
    EvalOptions opt;
    opt.max_value_bits = 1 << 14;
    CostLedger a, b;
    Nat v1, v2;
    try {
      v1 = eval(t, fs, xs, a, opt);
    } catch (const ValueTooLarge&) {
      continue;
    }
    const auto log = fs[0].log();
    CHECK(a.oracle_queries == log.size());
    Nat cost = 0;
    for (const auto& z : log) cost += bit_length(fs[0].peek(z));
    CHECK(a.kc_oracle_cost == cost);

    fs[0].clear_log();
    v2 = eval(t, fs, xs, b, opt);
    CHECK(v1 == v2);
    CHECK(a == b);

    std::vector<Oracle> restricted{fs[0].restricted_to(log)};
    CHECK(eval(t, restricted, xs) == v1);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_term("(proj 2)"), ParseError);
  CHECK_THROWS_AS(parse_term("(lrn1 :g 0 :h 0)"), ParseError);
  CHECK_THROWS_AS(parse_term("frob"), ParseError);
  CHECK_THROWS_AS(parse_oracle("1 2\n"), ParseError);
  Oracle f = parse_oracle("default 3\n0 5 # note\n7 1\n");
  CHECK(f.peek(n(0)) == 5);
  CHECK(f.peek(n(2)) == 3);
}
