#include <algorithm>
#include <set>
#include <string>

#include "doctest.h"
#include "i2e/litmus.hpp"
#include "support/gen.hpp"

using namespace i2e;
using namespace i2e::litmus;

namespace {

constexpr const char* kMp = R"(i2e-litmus v1
name: mp
thread P1:
  St a 42
  Commit
  St f 1
thread P2:
  r1 = Ld f
  Reconcile
  r2 = Ld a
check forbidden under wmm,wmm-d: r1=1 & r2=0
)";

std::string header(const std::string& body) {
  return "i2e-litmus v1\nname: t\n" + body;
}

ParseError parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no parse error for:\n" << text);
  return ParseError(0, 0, "");
}

// Random outcome shaped like `p`, values drawn from {0, 1, 2}.
Outcome random_outcome(gen::Rng& rng, const Program& p) {
  Outcome o;
  for (const auto& t : p.threads) {
    o.registers.emplace_back();
    for (std::size_t r = 0; r < t.registers.size(); ++r)
      o.registers.back().push_back(rng.range(0, 2));
  }
  for (std::size_t k = 0; k < p.addresses.size(); ++k)
    o.memory.push_back(rng.range(0, 2));
  return o;
}

}  // namespace

TEST_CASE("parse message passing") {
  LitmusTest t = parse(kMp);
  CHECK(t.name == "mp");
  REQUIRE(t.threads.size() == 2);
  CHECK(t.threads[0].name == "P1");
  CHECK(t.threads[0].code.size() == 3);
  CHECK(t.threads[0].code[1] == SurfaceInstr{FenceInstr{FenceKind::Commit}});
  CHECK(t.threads[1].code[1] == SurfaceInstr{FenceInstr{FenceKind::Reconcile}});
  REQUIRE(t.checks.size() == 1);
  CHECK(t.checks[0].polarity == Polarity::Forbidden);
  CHECK(t.checks[0].models ==
        std::vector<ModelKind>{ModelKind::Wmm, ModelKind::WmmD});
  CHECK(t.checks[0].applies_to(ModelKind::Wmm));
  CHECK_FALSE(t.checks[0].applies_to(ModelKind::Sc));
  CHECK(t.instruction_count() == 6);
}

TEST_CASE("address arithmetic keeps its terms in order") {
  LitmusTest t = parse(header(
      "thread P1:\n  r2 = Ld b\n  r3 = a + r2 - 1\ncheck allowed: r3=a\n"));
  const auto& as = std::get<AssignInstr>(t.threads[0].code[1]);
  CHECK(as.dst == "r3");
  REQUIRE(as.expr.terms.size() == 3);
  CHECK(as.expr.terms[0] == Term::sym("a"));
  CHECK(as.expr.terms[1] == Term::reg("r2"));
  CHECK(as.expr.terms[2].negated);
  CHECK(as.expr.terms[2].literal == 1);
  CHECK(to_text(as.expr) == "a + r2 - 1");
}

TEST_CASE("parse errors carry line and column") {
  SUBCASE("empty input") {
    CHECK(parse_error("").detail() == "no threads");
    CHECK(parse_error("  \n# only a comment\n").detail() == "no threads");
  }
  SUBCASE("missing header") {
    ParseError e = parse_error("name: x\n");
    CHECK(e.line() == 1);
    CHECK(e.detail().find("header") != std::string::npos);
  }
  SUBCASE("duplicate thread") {
    ParseError e = parse_error(
        header("thread P1:\n  St a 1\nthread P1:\n  St b 1\ncheck allowed: m[a]=1\n"));
    CHECK(e.line() == 5);
    CHECK(e.detail().find("duplicate thread") != std::string::npos);
  }
  SUBCASE("unresolved label") {
    ParseError e = parse_error(header(
        "thread P1:\n  r1 = Ld a\n  if r1 == 0 goto L9\ncheck allowed: r1=0\n"));
    CHECK(e.line() == 5);
    CHECK(e.detail() == "unresolved label 'L9'");
  }
  SUBCASE("unknown fence keyword") {
    ParseError e =
        parse_error(header("thread P1:\n  Fence\ncheck allowed: m[a]=0\n"));
    CHECK(e.line() == 4);
    CHECK(e.column() == 3);
    CHECK(e.detail() == "unknown fence keyword 'Fence'");
  }
  SUBCASE("no checks") {
    CHECK(parse_error(header("thread P1:\n  St a 1\n")).detail() == "no checks");
  }
  SUBCASE("register as memory location") {
    ParseError e = parse_error(
        header("thread P1:\n  r1 = Ld a\ncheck allowed: m[r1]=0\n"));
    CHECK(e.detail().find("register") != std::string::npos);
  }
}

TEST_CASE("addresses are bound at multiples of the stride") {
  LitmusTest t = parse(kMp);
  AddressMap m = bind_addresses(t);
  CHECK(m.lookup("a") == kAddressStride);
  CHECK(m.lookup("f") == 2 * kAddressStride);
  CHECK_FALSE(m.lookup("zz").has_value());
  CHECK(m.name_of(2 * kAddressStride) == std::string_view("f"));

  SUBCASE("stable under thread reordering") {
    LitmusTest r = t;
    std::reverse(r.threads.begin(), r.threads.end());
    CHECK(bind_addresses(r).entries() == m.entries());
  }
}

TEST_CASE("binding is injective on random tests") {
  gen::Rng rng(11);
  gen::TestShape shape;
  shape.locations = {"a", "b", "c", "d"};
  for (int i = 0; i < 200; ++i) {
    LitmusTest t = gen::random_test(rng, shape);
    AddressMap m = bind_addresses(t);
    std::set<Address> bases;
    for (const auto& [name, a] : m.entries()) {
      CHECK(a % kAddressStride == 0);
      CHECK(a > 0);
      bases.insert(a);
    }
    CHECK(bases.size() == m.size());
  }
}

TEST_CASE("bind resolves registers and rejects unknown names") {
  BoundTest b = bind(parse(kMp));
  REQUIRE(b.program.threads.size() == 2);
  CHECK(b.program.threads[1].registers ==
        std::vector<std::string>{"r1", "r2"});
  CHECK(b.program.threads[0].ops.size() == 3);
  CHECK(b.program.threads[0].ops[0].kind == Op::Kind::Store);

  CHECK_THROWS_AS(
      bind(parse(header("thread P1:\n  St a 1\ncheck allowed: r7=0\n"))),
      BindError);
  // A location named only by a check still gets an address.
  BoundTest q =
      bind(parse(header("thread P1:\n  St a 1\ncheck allowed: m[q]=0\n")));
  CHECK(q.program.addresses.lookup("q") == 2 * kAddressStride);
}

TEST_CASE("eval_condition") {
  BoundTest b = bind(parse(
      header("thread P1:\n  r1 = Ld a\nthread P2:\n  r2 = Ld b\n"
             "check allowed: (r1=1 | r2=b) & ~m[a]=2\n")));
  const BoundCondition& c = b.checks[0].cond;
  Outcome o{{{1}, {0}}, {0, 0}};
  CHECK(eval_condition(c, o));
  o.memory[0] = 2;
  CHECK_FALSE(eval_condition(c, o));
  o = Outcome{{{0}, {2 * kAddressStride}}, {0, 0}};
  CHECK(eval_condition(c, o));
  o.registers[1][0] = 0;
  CHECK_FALSE(eval_condition(c, o));
  CHECK(format_outcome(b.program, Outcome{{{1}, {0}}, {0, 0}}) ==
        "P1:r1=1 P2:r2=0 m[a]=0 m[b]=0");
}

TEST_CASE("printing then parsing is a fixpoint") {
  CHECK(parse(to_text(parse(kMp))) == parse(kMp));
  for (const LitmusTest& t : load_corpus()) {
    std::string once = to_text(t);
    CHECK(parse(once) == t);
    CHECK(to_text(parse(once)) == once);
  }
  gen::Rng rng(7);
  gen::TestShape shape;
  shape.branches = true;
  for (int i = 0; i < 300; ++i) {
    LitmusTest t = gen::random_test(rng, shape, "rt" + std::to_string(i));
    std::string once = to_text(t);
    INFO(once);
    CHECK(parse(once) == t);
  }
}

TEST_CASE("condition evaluation obeys boolean laws") {
  gen::Rng rng(3);
  gen::TestShape shape;
  for (int i = 0; i < 300; ++i) {
    LitmusTest t = gen::random_test(rng, shape);
    std::vector<std::string> regs;
    for (const Thread& th : t.threads)
      for (const SurfaceInstr& ins : th.code) {
        if (auto* l = std::get_if<LoadInstr>(&ins)) regs.push_back(l->dst);
        if (auto* a = std::get_if<AssignInstr>(&ins)) regs.push_back(a->dst);
      }
    Condition p = gen::random_condition(rng, 2, regs, shape.locations);
    Condition q = gen::random_condition(rng, 2, regs, shape.locations);
    t.checks.clear();
    for (const Condition& c :
         {p, q, Condition::negation(Condition::conj({p, q})),
          Condition::disj({Condition::negation(p), Condition::negation(q)}),
          Condition::negation(Condition::negation(p)),
          Condition::disj({p, q})})
      t.checks.push_back(Check{Polarity::Allowed, {}, c});
    BoundTest b = bind(t);
    for (int k = 0; k < 10; ++k) {
      Outcome o = random_outcome(rng, b.program);
      bool vp = eval_condition(b.checks[0].cond, o);
      bool vq = eval_condition(b.checks[1].cond, o);
      CHECK(eval_condition(b.checks[2].cond, o) ==
            eval_condition(b.checks[3].cond, o));
      CHECK(eval_condition(b.checks[4].cond, o) == vp);
      CHECK(eval_condition(b.checks[5].cond, o) == (vp || vq));
    }
  }
}

TEST_CASE("embedded corpus") {
  std::vector<LitmusTest> tests = load_corpus();
  CHECK(tests.size() >= 14);
  std::set<std::string> names;
  for (const LitmusTest& t : tests) {
    names.insert(t.name);
    CHECK(t.instruction_count() <= 12);
    CHECK_NOTHROW(bind(t));
  }
  CHECK(names.size() == tests.size());
  for (const char* n : {"dekker-wmm", "mp-wmm", "corr", "thin-air", "wwc",
                        "iriw", "rsw", "load-value-pred"})
    CHECK(names.contains(n));
}
