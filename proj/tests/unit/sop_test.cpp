#include <optional>

#include "bfflab/errors.hpp"
#include "bfflab/gen.hpp"
#include "bfflab/sop.hpp"
#include "bfflab/witness.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bfflab;

namespace {

Nat n(unsigned long v) { return Nat(v); }

SopPtr P(const char* s) { return parse_sop(s); }

Nat eval_at(const SopPtr& p, std::vector<unsigned long> lens, const std::vector<const Oracle*>& fs,
            NormMethod m = NormMethod::BruteForce) {
  std::vector<Nat> l(lens.begin(), lens.end());
  return sop_eval(p, SopEnv(l, fs, m));
}

std::map<std::uint64_t, std::uint64_t> table_of(const Oracle& f) {
  std::map<std::uint64_t, std::uint64_t> t;
  for (const auto& [k, v] : f.table()) t[k.get_ui()] = v.get_ui();
  return t;
}

/// Independent evaluator: explicit recursion with the reference norm. Gives
/// up (returns nullopt) on norm arguments too large to enumerate.
std::optional<std::uint64_t> ref_eval(const SopPtr& p, const std::vector<std::uint64_t>& lens,
                                      const std::map<std::uint64_t, std::uint64_t>& f) {
  if (p->kind == SopKind::Const) return p->value.get_ui();
  if (p->kind == SopKind::LenVar) return lens.at(p->index);
  auto a = ref_eval(p->lhs, lens, f);
  if (!a) return std::nullopt;
  if (p->kind == SopKind::NormApp) {
    if (*a > 16) return std::nullopt;
    return ref::norm(f, *a);
  }
  auto b = ref_eval(p->rhs, lens, f);
  if (!b) return std::nullopt;
  return p->kind == SopKind::Plus ? *a + *b : *a * *b;
}

}  // namespace

TEST_CASE("depth") {
  CHECK(depth(P("(+ (* (lx 0) (c 3)) (lx 1))")) == 0);
  CHECK(depth(P("(nf 0 (lx 0))")) == 1);
  CHECK(depth(P("(+ (nf 0 (nf 0 (lx 0))) (nf 0 (lx 0)))")) == 2);
}

TEST_CASE("norm") {
  Oracle id = Oracle::identity_on(0, 7);
  CHECK(norm(id, n(2), 20) == 2);
  Oracle nines;
  for (unsigned long y = 0; y < 4; ++y) nines.set(n(y), n(9));
  CHECK(norm(nines, n(2), 20) == 4);
  Oracle g(n(6));
  g.set(n(0), n(300));
  CHECK(norm(g, n(0), 20) == bit_length(n(300)));
  CHECK_THROWS_AS(norm(id, n(21), 20), NormCapExceeded);
  CHECK(table_norm(id, n(200)) == 3);
}

TEST_CASE("norm is monotone and the table method matches brute force") {
  gen::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    Oracle f = gen::table_oracle(rng, 0, gen::uniform(rng, 0, 20), 1000, gen::uniform(rng, 0, 9));
    Nat prev = 0;
    for (unsigned long x = 0; x <= 10; ++x) {
      Nat v = norm(f, n(x), 20);
      CHECK(v >= prev);
      CHECK(v == table_norm(f, n(x)));
      CHECK(v == ref::norm(table_of(f), x, f.default_value().get_ui()));
      prev = v;
    }
  }
}

TEST_CASE("sop_eval examples") {
  Oracle id = Oracle::identity_on(0, 7);
  CHECK(eval_at(P("(nf 0 (lx 0))"), {2}, {&id}) == 2);
  CHECK(eval_at(P("(c 7)"), {}, {}) == 7);
  CHECK(eval_at(P("(+ (* (lx 0) (lx 1)) (c 1))"), {3, 4}, {}) == 13);
}

TEST_CASE("sop_eval agrees with the reference evaluator") {
  gen::Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    SopPtr p = gen::random_sop(rng, {2, 4, 2, 1, 2});
    Oracle f = gen::table_oracle(rng, 0, 7, 7);
    std::vector<std::uint64_t> lens{gen::uniform(rng, 0, 3), gen::uniform(rng, 0, 3)};
    SopEnv env({n(lens[0]), n(lens[1])}, {&f}, NormMethod::Table);
    auto want = ref_eval(p, lens, table_of(f));
    if (!want) continue;
    CHECK(sop_eval(p, env) == *want);
  }
}

TEST_CASE("regularize examples") {
  auto r = regularize(P("(+ (nf 0 (lx 0)) (nf 0 (lx 1)))"));
  CHECK(format_sop(r) == "(+ (nf 0 (+ (lx 0) (lx 1))) (nf 0 (+ (lx 0) (lx 1))))");
  // The depth-2 argument also absorbs the depth-1 one.
  auto r2 = regularize(P("(+ (nf 0 (nf 0 (lx 0))) (nf 0 (lx 1)))"));
  CHECK(format_sop(r2) ==
        "(+ (nf 0 (+ (nf 0 (+ (lx 0) (lx 1))) (+ (lx 0) (lx 1)))) (nf 0 (+ (lx 0) (lx 1))))");
  CHECK(format_sop(regularize(P("(nf 0 (lx 0))"))) == "(nf 0 (lx 0))");
  CHECK(format_sop(regularize(P("(+ (lx 0) (c 3))"))) == "(+ (lx 0) (c 3))");
}

TEST_CASE("is_regular examples") {
  CHECK(is_regular(P("(nf 0 (nf 0 (lx 0)))")));
  CHECK_FALSE(is_regular(P("(+ (nf 0 (lx 0)) (nf 0 (lx 1)))")));
  CHECK(is_regular(P("(c 5)")));
  CHECK(is_regular(P("(* (nf 0 (lx 0)) (nf 0 (lx 0)))")));
}

TEST_CASE("regularization is sound") {
  gen::Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    gen::SopShape shape{2, 4, 2, gen::uniform(rng, 1, 2), 2};
    SopPtr p = gen::random_sop(rng, shape);
    SopPtr r = regularize(p);
    REQUIRE(is_regular(r));
    CHECK(depth(r) == depth(p));
    for (int e = 0; e < 20; ++e) {
      Oracle f0 = gen::table_oracle(rng, 0, 15, 255);
      Oracle f1 = gen::table_oracle(rng, 0, 15, 255);
      SopEnv env({n(gen::uniform(rng, 0, 8)), n(gen::uniform(rng, 0, 8))}, {&f0, &f1},
                 NormMethod::Table);
      CHECK(sop_eval(r, env) >= sop_eval(p, env));
    }
  }
}

TEST_CASE("regularized single-function polynomials form a chain") {
  gen::Rng rng(19);
  for (int i = 0; i < 100; ++i) {
    SopPtr r = regularize(gen::random_sop(rng, {3, 4, 2, 1, 2}));
    Oracle f = gen::table_oracle(rng, 0, 15, 255);
    SopEnv env({n(gen::uniform(rng, 0, 8)), n(gen::uniform(rng, 0, 8))}, {&f},
               NormMethod::Table);
    CHECK_FALSE(chain_violation(r, env).has_value());
  }
}

TEST_CASE("sop text round trip") {
  gen::Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    SopPtr p = gen::random_sop(rng, {3, 9, 3, 2, 3});
    CHECK(same_sop(parse_sop(format_sop(p)), p));
  }
  CHECK_THROWS_AS(P("(nf 0)"), ParseError);
  CHECK_THROWS_AS(P("(q 1)"), ParseError);
}

TEST_CASE("witness terms: |x0|") {
  auto w = witness_terms(P("(lx 0)"));
  REQUIRE(w.terms.size() == 1);
  CHECK(format_term(w.terms[0]) == "(comp monus (comp smash 1 (x 0)) 1)");
  for (unsigned long x = 0; x < 256; ++x) {
    auto rep = witness_check(P("(lx 0)"), w, {}, std::vector<Nat>{n(x)}, n(0), n(255));
    CHECK(rep.disagreements.empty());
  }
}

TEST_CASE("witness terms: |f|(|x0|) over all tables on [0,7] with values <= 7") {
  SopPtr p = P("(nf 0 (lx 0))");
  auto w = witness_terms(p);
  REQUIRE(w.terms.size() == 2);
  CHECK(format_term(w.terms[0]) == "(comp monus (comp smash 1 (x 0)) 1)");
  CHECK(format_term(w.terms[1]) == "(comp monus (comp smash 1 (ap 0 (x 1))) 1)");
  // Both sides see f only through |f(z)|, so the values 0, 1, 2, 4 stand
  // for every value <= 7.
  const unsigned long reps[] = {0, 1, 2, 4};
  std::size_t bad = 0;
  for (std::uint64_t code = 0; code < (1u << 16); ++code) {
    Oracle f;
    for (unsigned long z = 0; z < 8; ++z) f.set(n(z), n(reps[(code >> (2 * z)) & 3]));
    std::vector<Oracle> fs{f};
    for (unsigned long x : {0ul, 1ul, 3ul, 7ul}) {
      auto rep = witness_check(p, w, fs, std::vector<Nat>{n(x)}, n(0), n(255));
      if (!rep.disagreements.empty()) ++bad;
    }
  }
  CHECK(bad == 0);
  gen::Rng rng(29);
  for (int i = 0; i < 300; ++i) {
    std::vector<Oracle> fs{gen::nth_table(gen::uniform(rng, 0, (1u << 24) - 1), 0, 7, 7)};
    for (unsigned long x : {0ul, 1ul, 3ul, 7ul, 200ul}) {
      auto rep = witness_check(p, w, fs, std::vector<Nat>{n(x)}, n(0), n(255));
      CHECK(rep.disagreements.empty());
    }
  }
}

TEST_CASE("witness_check examples") {
  SopPtr x0 = P("(lx 0)");
  auto rep = witness_check(x0, witness_terms(x0), {}, std::vector<Nat>{n(5)}, n(0), n(31));
  CHECK(rep.disagreements.empty());

  SopPtr fx = P("(nf 0 (lx 0))");
  auto w = witness_terms(fx);
  w.terms[1] = term::lit(0);
  Oracle f;
  f.set(n(0), n(3));
  std::vector<Oracle> fs{f};
  auto bad = witness_check(fx, w, fs, std::vector<Nat>{n(0)}, n(0), n(7));
  REQUIRE_FALSE(bad.disagreements.empty());
  CHECK(bad.disagreements.front().u == 1);

  SopPtr zero = P("(c 0)");
  auto wz = witness_terms(zero);
  CHECK(format_term(wz.terms[0]) == "(comp monus (comp smash 1 0) 1)");
  auto rz = witness_check(zero, wz, {}, {}, n(0), n(3));
  CHECK(rz.disagreements.empty());
  CHECK(rz.rhs_max == 0);

  CHECK_THROWS_AS(witness_terms(P("(+ (nf 0 (lx 0)) (nf 0 (lx 1)))")), NotRegular);
  CHECK_THROWS_AS(witness_check(P("(nf 0 (lx 0))"), witness_terms(P("(nf 0 (lx 0))")),
                                std::vector<Oracle>{Oracle::identity_on(0, 1 << 20)},
                                std::vector<Nat>{n(1 << 20)}, n(0), n(1 << 30), 1000),
                  SearchSpaceTooLarge);
}
