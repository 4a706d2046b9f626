#include "bfflab/errors.hpp"
#include "bfflab/gen.hpp"
#include "bfflab/schemes.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bfflab;

namespace {

Nat n(unsigned long v) { return Nat(v); }

/// Plain simultaneous recursion over the prefixes of u, each value capped
/// by its bound.
std::vector<Nat> direct_mlrn(const MlrnSystem& sys, const Nat& u) {
  const std::size_t k = sys.size();
  std::vector<Nat> cur(k);
  for (std::size_t i = 0; i < k; ++i) cur[i] = eval(sys.g[i], {}, {});
  for (std::size_t len = 1; len <= bit_length(u); ++len) {
    Nat v = msp(u, n(len));
    std::vector<Nat> hargs{v};
    hargs.insert(hargs.end(), cur.begin(), cur.end());
    std::vector<Nat> next(k);
    for (std::size_t i = 0; i < k; ++i) {
      Nat raw = eval(sys.h[i], {}, hargs);
      std::vector<Nat> kargs{v};
      kargs.insert(kargs.end(), next.begin(), next.begin() + static_cast<long>(i));
      next[i] = std::min(raw, eval(sys.k[i], {}, kargs));
    }
    cur = next;
  }
  return cur;
}

MlrnSystem system(std::vector<const char*> g, std::vector<const char*> h,
                  std::vector<const char*> k) {
  MlrnSystem s;
  for (auto t : g) s.g.push_back(parse_term(t));
  for (auto t : h) s.h.push_back(parse_term(t));
  for (auto t : k) s.k.push_back(parse_term(t));
  return s;
}

}  // namespace

TEST_CASE("sqbd") {
  CHECK(sqbd(n(0), n(0)) == 8);
  CHECK(sqbd(n(1), n(2)) == 262144);
  CHECK(sqbd(n(0), n(0)) <= sqbd(n(1), n(0)));
}

TEST_CASE("sequence coding") {
  std::vector<Nat> xs{n(3), n(1), n(2)};
  auto c = seq::encode(xs, n(3));
  CHECK(c.width == 4);
  CHECK(seq::get(c, 0) == 3);
  CHECK(seq::decode(c) == xs);
  CHECK_THROWS_AS(seq::get(c, 3), IndexOutOfRange);

  std::vector<Nat> four(4, n(3));
  CHECK(seq::encode(four, n(3)).payload <= sqbd(n(3), n(7)));

  auto s = seq::append(seq::empty(seq::width_for(n(5))), n(5));
  CHECK(seq::get(s, 0) == 5);
  CHECK_THROWS_AS(seq::append(seq::empty(3), n(4)), ElementTooWide);
  CHECK(seq::decode(seq::widen(c, 9)) == xs);
}

TEST_CASE("sequence codes respect the SqBd certificate") {
  gen::Rng rng(31);
  for (unsigned long a = 0; a < 40; ++a)
    for (unsigned long b = 0; b < 40; ++b)
      for (int r = 0; r < 3; ++r) {
        std::vector<Nat> xs;
        const auto len = gen::uniform(rng, 0, bit_length(n(b)) + 1);
        for (std::uint64_t i = 0; i < len; ++i) xs.push_back(n(gen::uniform(rng, 0, a)));
        auto c = seq::encode(xs, n(a));
        CHECK(c.payload <= sqbd(n(a), n(b)));
        CHECK(c.payload < pow2(c.length * c.width));
        CHECK(seq::decode(c) == xs);
      }
}

TEST_CASE("Kbar is the largest K1 over prefixes") {
  auto id = [](const Nat& x) { return x; };
  CHECK(mlrn_kbar(id, n(13)) == 13);
  auto wobble = [](const Nat& x) { return Nat(x % 7); };
  for (unsigned long u = 0; u < 1024; ++u) {
    Nat best = 0;
    for (unsigned long i = 0; i <= ref::len(u); ++i) best = std::max(best, Nat(ref::msp(u, i) % 7));
    CHECK(mlrn_kbar(wobble, n(u)) == best);
  }
}

TEST_CASE("compile_mlrn: length and power fixture") {
  auto sys = system({"0", "1"}, {"(comp add (x 1) 1)", "(comp mul (x 2) 2)"},
                    {"(comp add (x 0) 1)", "(comp smash 1 (x 0))"});
  auto f = compile_mlrn(mlrn_callbacks(sys, {}));
  auto strict = compile_mlrn(mlrn_callbacks(sys, {}), BoundMode::Strict);
  for (unsigned long u = 0; u < 1024; ++u) {
    auto v = f(n(u), {});
    CHECK(v[0] == ref::len(u));
    CHECK(v[1] == pow2(ref::len(u)));
    CHECK(strict(n(u), {}) == v);
  }
}

TEST_CASE("compile_mlrn: constant system") {
  auto sys = system({"0", "0"}, {"(x 1)", "(x 2)"}, {"(x 0)", "(x 0)"});
  auto f = compile_mlrn(mlrn_callbacks(sys, {}));
  for (unsigned long u = 0; u < 256; ++u) CHECK(f(n(u), {}) == std::vector<Nat>{0, 0});
}

TEST_CASE("compile_mlrn: three functionals") {
  auto sys = system({"0", "1", "0"},
                    {"(comp add (x 1) 1)", "(comp mul (x 2) 2)", "(comp add (x 1) (x 2))"},
                    {"(comp add (x 0) 1)", "(comp smash 1 (x 0))", "(comp add (x 1) (x 2))"});
  auto f = compile_mlrn(mlrn_callbacks(sys, {}));
  for (unsigned long u = 0; u < 1024; ++u) CHECK(f(n(u), {}) == direct_mlrn(sys, n(u)));
}

TEST_CASE("compile_mlrn strict mode reports a failing bound") {
  auto sys = system({"0", "1"}, {"(comp add (x 1) 1)", "(comp mul (x 2) 4)"},
                    {"(comp add (x 0) 1)", "(comp smash 1 (x 0))"});
  auto f = compile_mlrn(mlrn_callbacks(sys, {}), BoundMode::Strict);
  CHECK_THROWS_AS(f(n(5), {}), BoundViolation);
  auto clamp = compile_mlrn(mlrn_callbacks(sys, {}));
  for (unsigned long u = 0; u < 256; ++u) CHECK(clamp(n(u), {}) == direct_mlrn(sys, n(u)));
}

TEST_CASE("eval_pbrn examples") {
  PbrnSystem s{parse_term("0"), parse_term("(comp add (x 0) 1)"), parse_sop("(+ (lx 0) (c 1))")};
  CHECK(eval_pbrn(s, {}, {}, n(13)) == 4);
  SchemeOptions strict;
  strict.mode = BoundMode::Strict;
  s.q = parse_sop("(c 1)");
  try {
    eval_pbrn(s, {}, {}, n(2), strict);
    FAIL("expected a bound violation");
  } catch (const BoundViolation& e) {
    CHECK(e.step() == "y=2");
    CHECK(e.value() == "2");
  }
  CHECK(eval_pbrn(s, {}, {}, n(0), strict) == 0);
  CHECK(eval_pbrn(s, {}, {}, n(2)) == 1);
}

TEST_CASE("eval_pbrn matches unbounded recursion when the bound holds") {
  // F(y) = F(y/2) + f(y mod 16) mod 8, Q = 3|y| + 3 is never exceeded.
  PbrnSystem s{parse_term("(ap 0 0)"),
               parse_term("(comp add (x 1) (comp monus (ap 0 (comp monus (x 2) (comp mul (comp half (comp half (comp half (comp half (x 2))))) 16))) 0))"),
               parse_sop("(+ (* (c 3) (lx 1)) (c 3))")};
  gen::Rng rng(37);
  Oracle f = gen::table_oracle(rng, 0, 15, 7);
  std::vector<Oracle> fs{f};
  const std::uint64_t x = 9;
  for (std::uint64_t y = 0; y < 4096; ++y) {
    std::uint64_t want = f.peek(0).get_ui();
    for (std::uint64_t i = 1; i <= ref::len(y); ++i)
      want = want + f.peek(n(ref::msp(y, i) % 16)).get_ui();
    CHECK(eval_pbrn(s, fs, std::vector<Nat>{n(x)}, n(y)) == want);
  }
}

TEST_CASE("clocked PBRPL: fixpoint iteration") {
  Oracle f;
  f.set(5, 3);
  f.set(3, 1);
  f.set(1, 1);
  std::vector<Oracle> fs{f};
  std::vector<Nat> xs{n(5)};
  PbrplSystem s{parse_term("(x 0)"), parse_term("(ap 0 (x 1))"), parse_sop("(+ (lx 0) (c 1))"),
                parse_sop("(+ (lx 0) (c 1))")};
  auto r = eval_pbrpl_clocked(s, fs, xs);
  CHECK(r.steps == 4);
  CHECK(r.value == 1);

  s.p = parse_sop("(+ (nf 0 (lx 0)) (c 1))");
  auto r2 = eval_pbrpl_clocked(s, fs, xs);
  CHECK(r2.value == 1);
  SopEnv env = SopEnv::from_args(xs, {&f}, NormMethod::Table);
  CHECK(r2.value == pbrpl_iterate(s, fs, xs, sop_eval(s.p, env)));

  PbrplSystem zero{parse_term("(x 0)"), parse_term("(ap 0 (x 1))"), parse_sop("(c 0)"),
                   parse_sop("(+ (lx 0) (c 1))")};
  auto r3 = eval_pbrpl_clocked(zero, fs, xs);
  CHECK(r3.value == 5);
  CHECK(r3.steps == 0);
}

TEST_CASE("clocked PBRPL: non-termination and bound errors") {
  // G queries f(|x|) = 2^60, after which P* = 61 exceeds the cap.
  Oracle big(pow2(60));
  PbrplSystem asks{parse_term("(comp monus (ap 0 (x 0)) (ap 0 (x 0)))"),
                   parse_term("(comp add (x 1) 1)"), parse_sop("(nf 0 (lx 0))"),
                   parse_sop("(c 64)")};
  std::vector<Oracle> fs{big};
  CHECK_THROWS_AS(eval_pbrpl_clocked(asks, fs, std::vector<Nat>{n(1)}, 10), NonTermination);
  PbrplSystem tight{parse_term("(x 0)"), parse_term("(x 0)"), parse_sop("(c 3)"),
                    parse_sop("(c 1)")};
  CHECK_THROWS_AS(eval_pbrpl_clocked(tight, {}, std::vector<Nat>{n(5)}), BoundViolation);
}

TEST_CASE("validate_pbrpl") {
  PbrplSystem fix{parse_term("(x 0)"), parse_term("(ap 0 (x 1))"), parse_sop("(+ (lx 0) (c 1))"),
                  parse_sop("(+ (lx 0) (c 3))")};
  std::vector<PbrplSample> domain;
  Oracle f;
  f.set(5, 3);
  f.set(3, 1);
  f.set(1, 1);
  domain.push_back({{f}, {n(5)}});
  Oracle g = Oracle::identity_on(0, 7);
  domain.push_back({{g}, {n(5)}});
  auto rep = validate_pbrpl(fix, domain);
  CHECK(rep.ok());
  CHECK(rep.locality_pairs == 2);

  PbrplSystem counter{parse_term("0"), parse_term("(comp add (x 1) 1)"),
                      parse_sop("(+ (lx 0) (c 1))"), parse_sop("(c 8)")};
  auto bad = validate_pbrpl(counter, domain);
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.violations.front().condition == "stabilization");

  CHECK(validate_pbrpl(counter, {}).ok());
}

TEST_CASE("scheme files") {
  auto m = parse_mlrn(parse_sexpr(
      "(mlrn :g1 0 :h1 (comp add (x 1) 1) :k1 (comp add (x 0) 1) "
      ":g2 1 :h2 (comp mul (x 2) 2) :k2 (comp smash 1 (x 0)))"));
  CHECK(m.size() == 2);
  CHECK_THROWS_AS(parse_mlrn(parse_sexpr("(mlrn :g1 0 :h1 0)")), ParseError);
  CHECK_THROWS_AS(parse_pbrn(parse_sexpr("(pbrn :g 0 :h 0 :q (c 1) :z 0)")), ParseError);
  auto p = parse_pbrpl(parse_sexpr("(pbrpl :g (x 0) :h (ap 0 (x 1)) :p (lx 0) :q (c 2))"));
  CHECK(format_sop(p.q) == "(c 2)");
}
