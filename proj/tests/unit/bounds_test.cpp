#include "bfflab/bounds.hpp"
#include "bfflab/errors.hpp"
#include "bfflab/gen.hpp"
#include "doctest.h"

using namespace bfflab;

namespace {

std::string bound_of(const char* t) { return format_sop(infer_bound(parse_term(t))); }

}  // namespace

TEST_CASE("infer_bound rule table") {
  CHECK(bound_of("(comp add (x 0) (x 1))") == "(+ (+ (lx 0) (lx 1)) (c 1))");
  CHECK(bound_of("(comp mul (x 0) (x 1))") == "(+ (lx 0) (lx 1))");
  CHECK(bound_of("(comp smash (x 0) (x 1))") == "(+ (* (lx 0) (lx 1)) (c 1))");
  CHECK(bound_of("(ap 0 (x 0))") == "(nf 0 (lx 0))");
  CHECK(bound_of("(comp half (x 0))") == "(lx 0)");
  CHECK(bound_of("5") == "(c 3)");
  CHECK(bound_of("(comp condle (x 0) (x 1) (x 2) (x 3))") == "(+ (lx 2) (lx 3))");
  CHECK(bound_of("(comp add (ap 0 (x 0)) 1)") == "(+ (+ (nf 0 (lx 0)) (c 1)) (c 1))");
}

TEST_CASE("check_majorization examples") {
  auto t = parse_term("(comp add (x 0) (x 0))");
  std::vector<Sample> samples;
  for (unsigned long x = 0; x < 64; ++x) samples.push_back({{}, {Nat(x)}});
  auto ok = check_majorization(t, infer_bound(t), samples);
  CHECK(ok.checked == 64);
  CHECK(ok.violations.empty());
  auto bad = check_majorization(t, parse_sop("(lx 0)"), samples);
  CHECK(bad.violations.size() == 63);
}

TEST_CASE("inferred bounds majorize random terms") {
  gen::Rng rng(41);
  gen::TermShape shape;
  shape.depth = 3;
  std::size_t checked = 0;
  for (int i = 0; i < 300; ++i) {
    auto t = gen::random_term(rng, Rank{1, 2}, shape);
    auto b = infer_bound(t);
    std::vector<Sample> samples;
    for (int s = 0; s < 10; ++s)
      samples.push_back({{gen::table_oracle(rng, 0, 31, 63)},
                         {Nat(gen::uniform(rng, 0, 40)), Nat(gen::uniform(rng, 0, 40))}});
    auto rep = check_majorization(t, b, samples, NormMethod::Table);
    checked += rep.checked;
    CHECK_MESSAGE(rep.violations.empty(), format_term(t));
  }
  CHECK(checked > 1500);
}
