#include <deque>
#include <string>

#include "doctest.h"
#include "i2e/isa.hpp"
#include "i2e/litmus.hpp"
#include "support/gen.hpp"

using namespace i2e;
using namespace i2e::isa;

namespace {

constexpr Address A = 1024;
constexpr Address B = 2048;

litmus::Program program(const std::string& body) {
  return litmus::bind(litmus::parse("i2e-litmus v1\nname: t\n" + body))
      .program;
}

StoreEntry st(Address a, Value v) { return StoreEntry{a, v, 0, kNoTag}; }

}  // namespace

TEST_CASE("store buffer queries") {
  StoreBuffer sb;
  CHECK(sb.empty());
  CHECK_FALSE(sb.any_addr());
  CHECK_THROWS_AS(sb.deq(), ContractViolation);
  CHECK_THROWS_AS(sb.rm_oldest(A), ContractViolation);

  sb.enq(st(A, 1));
  sb.enq(st(B, 2));
  sb.enq(st(A, 3));
  CHECK(sb.exist(A));
  CHECK_FALSE(sb.exist(3072));
  CHECK(sb.youngest(A)->value == 3);
  CHECK(sb.oldest(A)->value == 1);
  CHECK(sb.any_addr() == A);
  CHECK(sb.addresses() == std::vector<Address>{A, B});
  CHECK(sb.entries_for(A).size() == 2);

  StoreEntry e = sb.rm_oldest(B);
  CHECK(e.value == 2);
  CHECK(sb.addresses() == std::vector<Address>{A});
  CHECK(sb.deq().value == 1);
  CHECK(sb.deq().value == 3);
  CHECK(sb.empty());
}

TEST_CASE("store buffer tag lookup") {
  StoreBuffer sb;
  sb.enq(StoreEntry{A, 1, 0, 7});
  CHECK(sb.has(7));
  CHECK_FALSE(sb.has(8));
  CHECK_FALSE(sb.has(kNoTag));
}

TEST_CASE("store buffer is FIFO overall and per address") {
  gen::Rng rng(5);
  for (int round = 0; round < 200; ++round) {
    StoreBuffer sb;
    std::deque<StoreEntry> model;
    for (int i = 0; i < 40; ++i) {
      if (model.empty() || rng.coin(0.6)) {
        StoreEntry e = st(rng.coin() ? A : B, rng.range(0, 100));
        sb.enq(e);
        model.push_back(e);
      } else if (rng.coin()) {
        CHECK(sb.deq() == model.front());
        model.pop_front();
      } else {
        Address a = model[rng.below(model.size())].addr;
        StoreEntry got = sb.rm_oldest(a);
        auto it = std::find_if(model.begin(), model.end(),
                               [a](const StoreEntry& x) { return x.addr == a; });
        CHECK(got == *it);
        model.erase(it);
      }
      REQUIRE(sb.size() == model.size());
      CHECK(std::equal(model.begin(), model.end(), sb.entries().begin()));
    }
  }
}

TEST_CASE("invalidation buffer basics") {
  InvalidationBuffer ib;
  CHECK(ib.empty());
  ib.insert(A, 1);
  ib.insert(B, 5);
  ib.insert(A, 2);
  CHECK(ib.exist(A));
  CHECK(ib.count(A) == 2);
  CHECK(ib.random(A, 1)->value == 2);
  CHECK_FALSE(ib.random(A, 2));
  ib.rm_addr(A);
  CHECK_FALSE(ib.exist(A));
  CHECK(ib.count(B) == 1);
  ib.clear();
  CHECK(ib.empty());
}

TEST_CASE("getRandom keeps the chosen entry and drops older ones") {
  auto fresh = [] {
    InvalidationBuffer ib;
    ib.insert(A, 10);
    ib.insert(B, 99);
    ib.insert(A, 11);
    ib.insert(A, 12);
    return ib;
  };
  SUBCASE("choose the youngest") {
    InvalidationBuffer ib = fresh();
    CHECK(ib.get_random(A, 2) == 12);
    CHECK(ib.entries_for(A).size() == 1);
    CHECK(ib.entries_for(A)[0].value == 12);
    CHECK(ib.count(B) == 1);
  }
  SUBCASE("choose the oldest") {
    InvalidationBuffer ib = fresh();
    CHECK(ib.get_random(A, 0) == 10);
    CHECK(ib.entries() == fresh().entries());
  }
  SUBCASE("middle") {
    InvalidationBuffer ib = fresh();
    CHECK(ib.get_random(A, 1) == 11);
    CHECK(ib.count(A) == 2);
  }
  SUBCASE("out of range") {
    InvalidationBuffer ib = fresh();
    CHECK_THROWS_AS(ib.get_random(A, 3), ContractViolation);
  }
}

TEST_CASE("rm_older uses a strict threshold on insertion time") {
  InvalidationBuffer ib;
  ib.insert(A, 1, 0, 0, 1);
  ib.insert(A, 2, 0, 0, 2);
  ib.insert(B, 3, 0, 0, 1);
  ib.insert(A, 4, 0, 0, 4);
  ib.rm_older(A, 3);
  REQUIRE(ib.count(A) == 1);
  CHECK(ib.entries_for(A)[0].value == 4);
  CHECK(ib.count(B) == 1);
  ib.rm_older(A, 4);
  CHECK(ib.count(A) == 1);
}

TEST_CASE("decode evaluates operands") {
  litmus::Program p = program(
      "thread P1:\n  r1 = Ld a\n  r2 = r1 + b - 1\n  St r2 r1\n  Commit\n"
      "  Reconcile\n  if r1 == 5 goto L\n  r3 = 7\nL:\ncheck allowed: r1=0\n");
  const litmus::ThreadCode& code = p.threads[0];
  ProcState s = initial_proc(code);
  CHECK(s.regs.size() == 3);

  DecodedInstr d = decode(code, s);
  CHECK(d.kind == DecodedKind::Ld);
  CHECK(d.addr == A);
  CHECK(d.next_pc == 1);
  CHECK_THROWS_AS(execute(s, d, std::nullopt), ContractViolation);
  execute(s, d, 5);
  CHECK(s.regs[0] == 5);
  CHECK(s.pc == 1);

  d = decode(code, s);
  CHECK(d.kind == DecodedKind::Nm);
  CHECK(d.value == B + 4);
  execute(s, d, std::nullopt);

  d = decode(code, s);
  CHECK(d.kind == DecodedKind::St);
  CHECK(d.addr == B + 4);
  CHECK(d.value == 5);
  execute(s, d, std::nullopt);

  CHECK(decode(code, s).kind == DecodedKind::Commit);
  execute(s, decode(code, s), std::nullopt);
  CHECK(decode(code, s).kind == DecodedKind::Reconcile);
  execute(s, decode(code, s), std::nullopt);

  d = decode(code, s);
  CHECK(d.kind == DecodedKind::Nm);
  CHECK_FALSE(d.dst.has_value());
  CHECK(d.next_pc == code.ops.size());  // taken: skips r3 = 7
  execute(s, d, std::nullopt);
  CHECK(decode(code, s).kind == DecodedKind::Halt);
  CHECK_THROWS_AS(execute(s, decode(code, s), std::nullopt), ContractViolation);
}

TEST_CASE("decode rejects negative addresses") {
  litmus::Program p =
      program("thread P1:\n  r1 = 0 - 5\n  r2 = Ld r1\ncheck allowed: r2=0\n");
  ProcState s = initial_proc(p.threads[0]);
  execute(s, decode(p.threads[0], s), std::nullopt);
  CHECK_THROWS_AS(decode(p.threads[0], s), ModelError);
}

TEST_CASE("decode_ts is the max timestamp of the registers read") {
  gen::Rng rng(9);
  litmus::Program p = program(
      "thread P1:\n  r1 = Ld a\n  r2 = Ld b\n  r3 = r1 + r2\n  St r1 r3\n"
      "  r4 = 1\ncheck allowed: r1=0\n");
  const litmus::ThreadCode& code = p.threads[0];
  for (int i = 0; i < 100; ++i) {
    ProcState s = initial_proc(code);
    for (auto& t : s.reg_ts) t = rng.below(50);
    s.regs = {A, 0, 0, 0};
    s.pc = 2;
    CHECK(decode_ts(code, s).ts == std::max(s.reg_ts[0], s.reg_ts[1]));
    s.pc = 3;
    CHECK(decode_ts(code, s).ts == std::max(s.reg_ts[0], s.reg_ts[2]));
    s.pc = 4;
    CHECK(decode_ts(code, s).ts == 0);
    CHECK(decode_ts(code, s).instr == decode(code, s));
  }
}

TEST_CASE("execute_ts stamps only the destination") {
  litmus::Program p =
      program("thread P1:\n  r1 = Ld a\n  St a 1\ncheck allowed: r1=0\n");
  ProcState s = initial_proc(p.threads[0]);
  execute_ts(s, decode(p.threads[0], s), 3, Timestamp{6});
  CHECK(s.regs[0] == 3);
  CHECK(s.reg_ts[0] == 6);
  ProcState before = s;
  execute_ts(s, decode(p.threads[0], s), std::nullopt, Timestamp{9});
  CHECK(s.reg_ts == before.reg_ts);
  CHECK(s.pc == 2);
}
