#include "bfflab/errors.hpp"
#include "bfflab/gen.hpp"
#include "bfflab/otm.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bfflab;

namespace {

Machine fixture(const char* name) {
  return load_machine(std::string(BFFLAB_FIXTURES) + "/machines/" + name + ".otm");
}

std::vector<std::string> errors_of(const char* text) {
  try {
    parse_machine(text);
  } catch (const MachineError& e) {
    return e.errors();
  }
  return {};
}

bool mentions(const std::vector<std::string>& errs, const std::string& what) {
  for (const auto& e : errs)
    if (e.find(what) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("numerals") {
  CHECK(to_binary(Nat(5)) == "101");
  CHECK(to_binary(Nat(0)).empty());
  CHECK(read_numeral("101__") == 5);
  CHECK(read_numeral("") == 0);
  CHECK_FALSE(read_numeral("1#1").has_value());
}

TEST_CASE("oracle application machine") {
  auto m = fixture("ap");
  Oracle f;
  f.set(3, 5);
  std::vector<Oracle> fs{f};
  std::vector<Nat> in{Nat(3)};
  auto r = run(m, fs, in);
  CHECK(r.output == 5);
  CHECK(r.t_unit == 8);
  CHECK(r.t_len == 10);
  CHECK(r.queries == 1);
  CHECK_FALSE(r.rejected);

  Oracle zero;
  std::vector<Oracle> zs{zero};
  auto z = run(m, zs, in);
  CHECK(z.output == 0);
  CHECK(z.t_unit == 6);
  CHECK(z.t_len == 5);
}

TEST_CASE("fixture machines compute their functions") {
  auto ap = fixture("ap");
  auto ff = fixture("ff");
  auto inc = fixture("inc");
  gen::Rng rng(43);
  for (int i = 0; i < 200; ++i) {
    std::vector<Oracle> fs{gen::table_oracle(rng, 0, 63, 63)};
    const std::uint64_t x = gen::uniform(rng, 0, 63);
    std::vector<Nat> in{Nat(x)};
    const auto fx = fs[0].peek(Nat(x));
    auto r = run(ap, fs, in);
    CHECK(r.output == fx);
    CHECK(r.t_unit == ref::len(x) + std::max<std::uint64_t>(1, ref::len(fx.get_ui())) + 3);
    CHECK(run(ff, fs, in).output == fs[0].peek(fx));
    CHECK(run(inc, fs, in).output == x + 1);
  }
}

TEST_CASE("halting machine takes one step") {
  auto m = fixture("halt");
  std::vector<Nat> in{Nat(6)};
  auto r = run(m, {}, in);
  CHECK(r.t_unit == 1);
  CHECK(r.output == 0);
}

TEST_CASE("missing transition rejects") {
  auto m = parse_machine(
      "states: s t\ntapes: input output\ninit: s\nhalt: t\ndelta:\n(s, 1 *) -> (* *, R S, s)\n");
  std::vector<Nat> in{Nat(4)};
  auto r = run(m, {}, in);
  CHECK(r.rejected);
  CHECK(r.t_unit == 1);
}

TEST_CASE("machine well-formedness") {
  const std::string head = "states: s t q\ntapes: input output oin:0 oout:0\ninit: s\nhalt: t\n";
  CHECK(mentions(errors_of((head + "delta:\n(s, 0 * * *) -> (* * * *, R S S S, s)\n"
                                   "(s, * * * 1) -> (* * * *, R S S S, t)\n")
                               .c_str()),
                 "nondeterministic"));
  CHECK(mentions(
      errors_of((head + "delta:\n(s, 0 * * *) -> (* * * 1, R S S S, s)\n").c_str()),
      "read-only oracle output"));
  CHECK(mentions(errors_of((head + "delta:\n(s, 0 * * *) -> (1 * * *, R S S S, s)\n").c_str()),
                 "input tape"));
  CHECK(mentions(errors_of((head + "delta:\n(s, * * 0 *) -> (* * * *, R S S S, s)\n").c_str()),
                 "write-only oracle input"));
  CHECK(mentions(errors_of((head + "delta:\n(t, * * * *) -> (* * * *, S S S S, s)\n").c_str()),
                 "halting state"));
  CHECK(mentions(errors_of((head + "query 0: q -> s\ndelta:\n(q, * * * *) -> (* * * *, S S S S, s)\n")
                               .c_str()),
                 "query state"));
  CHECK(mentions(errors_of("states: s\n"), "missing tapes"));
  CHECK(errors_of((head + "delta:\n(s, * * * *) -> (* * * *, S S S S, t)\n").c_str()).empty());
}

TEST_CASE("check_time_bound") {
  auto m = fixture("ap");
  gen::Rng rng(47);
  std::vector<OtmSample> samples;
  for (int i = 0; i < 50; ++i)
    samples.push_back({{gen::table_oracle(rng, 0, 31, 255)}, {Nat(gen::uniform(rng, 0, 31))}});
  auto ok = check_time_bound(m, parse_sop("(+ (+ (lx 0) (nf 0 (lx 0))) (c 4))"), samples);
  CHECK(ok.checked == 50);
  CHECK(ok.violations.empty());
  auto bad = check_time_bound(m, parse_sop("(lx 0)"), samples);
  REQUIRE_FALSE(bad.violations.empty());
  CHECK(bad.violations.front().kind == "time");
}
