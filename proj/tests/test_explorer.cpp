#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "doctest.h"
#include "i2e/explorer.hpp"
#include "support/corpus.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace i2e;
namespace ex = i2e::explore;
namespace lt = i2e::litmus;

namespace {

using OutcomeSet = std::set<lt::Outcome>;

OutcomeSet keys(const ex::ExploreResult& r) {
  OutcomeSet out;
  for (const auto& [o, _] : r.outcomes) out.insert(o);
  return out;
}

lt::BoundTest bound(const std::string& body) {
  return lt::bind(lt::parse("i2e-litmus v1\nname: t\n" + body));
}

OutcomeSet explore_set(const lt::Program& p, ModelKind m,
                       ex::ExploreOptions opt = {}) {
  auto model = make_model(m, p);
  auto r = ex::explore(*model, opt);
  REQUIRE(r.complete());
  return keys(r);
}

corpus::Corpus& shared_corpus() {
  static corpus::Corpus c;
  return c;
}

constexpr const char* kSb =
    "thread P1:\n  St a 1\n  r1 = Ld b\nthread P2:\n  St b 1\n  r2 = Ld a\n"
    "check forbidden: r1=0 & r2=0\n";

}  // namespace

TEST_CASE("store buffering outcomes per model") {
  lt::BoundTest t = bound(kSb);
  OutcomeSet sc = explore_set(t.program, ModelKind::Sc);
  OutcomeSet tso = explore_set(t.program, ModelKind::Tso);
  CHECK(sc.size() == 3);
  CHECK(tso.size() == 4);
  lt::Outcome both_zero{{{0}, {0}}, {1, 1}};
  CHECK_FALSE(sc.contains(both_zero));
  CHECK(tso.contains(both_zero));

  ex::Verdict v = ex::check(t, ModelKind::Tso);
  REQUIRE(v.checks.size() == 1);
  CHECK(v.checks[0].satisfiable);
  CHECK_FALSE(v.checks[0].pass);
  CHECK(v.checks[0].witness.has_value());
  CHECK_FALSE(v.all_pass());
  CHECK(ex::check(t, ModelKind::Sc).all_pass());
}

TEST_CASE("successors and terminal states") {
  lt::BoundTest t = bound(kSb);
  auto model = make_model(ModelKind::Sc, t.program);
  MachineState s0 = model->initial_state();
  CHECK_FALSE(model->is_terminal(s0));
  auto succ = ex::successors(*model, s0);
  CHECK(succ.size() == 2);
  for (const auto& [r, s] : succ) CHECK(s == model->fire(s0, r));

  lt::BoundTest empty = bound("thread P1:\n  r1 = 1\ncheck allowed: r1=1\n");
  auto m2 = make_model(ModelKind::Wmm, empty.program);
  auto r = ex::explore(*m2);
  CHECK(r.outcomes.size() == 1);
  CHECK(r.stats.states == 2);
  CHECK(r.deadlocks.empty());
}

TEST_CASE("canonical key ignores tag numbering and the tag counter") {
  MachineState a;
  a.procs.resize(2);
  a.procs[0].sb.enq(isa::StoreEntry{1024, 1, 0, 5});
  a.procs[1].sb.enq(isa::StoreEntry{1024, 1, 0, 5});
  a.next_tag = 6;
  MachineState b = a;
  b.procs[0].sb = {};
  b.procs[1].sb = {};
  b.procs[0].sb.enq(isa::StoreEntry{1024, 1, 0, 9});
  b.procs[1].sb.enq(isa::StoreEntry{1024, 1, 0, 9});
  b.next_tag = 40;
  CHECK(ex::canonical_key(a) == ex::canonical_key(b));

  MachineState c = a;
  c.procs[1].sb = {};
  c.procs[1].sb.enq(isa::StoreEntry{1024, 1, 0, 7});  // distinct store
  CHECK(ex::canonical_key(a) != ex::canonical_key(c));

  MachineState d = a;
  d.write(2048, MemCell{3});
  CHECK(ex::canonical_key(a) != ex::canonical_key(d));
  MachineState e = a;
  e.gts = 1;
  CHECK(ex::canonical_key(a) != ex::canonical_key(e));
}

TEST_CASE("limits yield an inconclusive result, never a verdict") {
  const lt::BoundTest& t = shared_corpus().get("iriw");
  ex::ExploreOptions opt;
  opt.limits.max_states = 50;
  auto model = make_model(ModelKind::WmmS, t.program);
  auto r = ex::explore(*model, opt);
  CHECK_FALSE(r.complete());
  CHECK_FALSE(r.inconclusive_reason.empty());
  CHECK(r.stats.states <= 51);

  ex::Verdict v = ex::check(t, ModelKind::WmmS, opt);
  CHECK(v.inconclusive());
  CHECK(v.checks.empty());

  opt.limits.max_states = 5'000'000;
  opt.limits.time_budget = std::chrono::milliseconds(0);
  CHECK_FALSE(ex::explore(*model, opt).complete());
}

TEST_CASE("engines agree with the reference enumerators on random programs") {
  gen::Rng rng(2024);
  gen::TestShape shape;
  shape.branches = true;
  for (int i = 0; i < 150; ++i) {
    lt::BoundTest t = lt::bind(gen::random_test(rng, shape));
    INFO(lt::to_text(t.source));
    CHECK(explore_set(t.program, ModelKind::Sc) ==
          oracle::outcomes(t.program, oracle::Buffering::None));
    CHECK(explore_set(t.program, ModelKind::Tso) ==
          oracle::outcomes(t.program, oracle::Buffering::Fifo));
    CHECK(explore_set(t.program, ModelKind::Pso) ==
          oracle::outcomes(t.program, oracle::Buffering::PerAddress));
  }
}

TEST_CASE("SC, TSO and PSO match the reference enumerators on the corpus") {
  for (const auto& t : shared_corpus().tests()) {
    INFO(t->source.name);
    CHECK(keys(shared_corpus().verdict(t->source.name, ModelKind::Sc).result) ==
          oracle::outcomes(t->program, oracle::Buffering::None));
    CHECK(keys(shared_corpus().verdict(t->source.name, ModelKind::Tso).result) ==
          oracle::outcomes(t->program, oracle::Buffering::Fifo));
    CHECK(keys(shared_corpus().verdict(t->source.name, ModelKind::Pso).result) ==
          oracle::outcomes(t->program, oracle::Buffering::PerAddress));
  }
}

TEST_CASE("random programs: order, dedup and model inclusion") {
  // Store-heavy programs blow up under WMM-S; runs over the cap are skipped
  // here, since a capped run makes no claim.
  constexpr std::size_t kCap = 100'000;
  auto bounded = [](const lt::Program& p, ModelKind m, ex::ExploreOptions opt)
      -> std::optional<OutcomeSet> {
    opt.limits.max_states = kCap;
    opt.witnesses = false;
    auto model = make_model(m, p);
    auto r = ex::explore(*model, opt);
    if (!r.complete()) return std::nullopt;
    return keys(r);
  };
  gen::Rng rng(77);
  gen::TestShape shape;
  std::size_t skipped = 0;
  for (int i = 0; i < 60; ++i) {
    lt::BoundTest t = lt::bind(gen::random_test(rng, shape));
    INFO(lt::to_text(t.source));
    std::map<ModelKind, OutcomeSet> sets;
    for (ModelKind m : kAllModels) {
      auto base = bounded(t.program, m, {});
      if (!base) {
        ++skipped;
        continue;
      }
      sets[m] = *base;
      ex::ExploreOptions bfs;
      bfs.order = ex::SearchOrder::Bfs;
      CHECK(bounded(t.program, m, bfs) == base);
      ex::ExploreOptions rnd;
      rnd.order = ex::SearchOrder::Random;
      rnd.seed = rng.below(1000);
      CHECK(bounded(t.program, m, rnd) == base);
      if (t.source.instruction_count() <= 5) {
        ex::ExploreOptions nodedup;
        nodedup.dedup = false;
        auto r = bounded(t.program, m, nodedup);
        if (r) CHECK(*r == *base);
      }
    }
    auto subset = [&](ModelKind a, ModelKind b) {
      if (!sets.contains(a) || !sets.contains(b)) return true;
      return std::includes(sets[b].begin(), sets[b].end(), sets[a].begin(),
                           sets[a].end());
    };
    CHECK(subset(ModelKind::Sc, ModelKind::Tso));
    CHECK(subset(ModelKind::Tso, ModelKind::Pso));
    CHECK(subset(ModelKind::Pso, ModelKind::Wmm));
    CHECK(subset(ModelKind::Wmm, ModelKind::WmmS));
    CHECK(subset(ModelKind::WmmD, ModelKind::Wmm));
  }
  CHECK(skipped < 10);
}

TEST_CASE("dedup does not change outcome sets on small corpus tests") {
  for (const auto& t : shared_corpus().tests()) {
    if (t->source.instruction_count() > 10) continue;
    for (ModelKind m : {ModelKind::Tso, ModelKind::Wmm, ModelKind::WmmD}) {
      INFO(t->source.name << " " << model_name(m));
      ex::ExploreOptions opt;
      opt.dedup = false;
      opt.witnesses = false;
      opt.limits.max_states = 500'000;
      auto model = make_model(m, t->program);
      auto r = ex::explore(*model, opt);
      if (!r.complete()) continue;  // too large without dedup; not a claim
      CHECK(keys(r) == keys(shared_corpus().verdict(t->source.name, m).result));
      CHECK(r.stats.dedup_hits == 0);
    }
  }
}

TEST_CASE("witnesses replay and observers see every transition") {
  lt::BoundTest t = bound(kSb);
  for (ModelKind m : kAllModels) {
    auto model = make_model(m, t.program);
    std::size_t seen = 0;
    ex::ExploreOptions opt;
    opt.observer = [&](const MachineState&, const RuleInstance&,
                       const MachineState&) { ++seen; };
    opt.check_invariants = true;
    auto r = ex::explore(*model, opt);
    CHECK(seen == r.stats.transitions);
    CHECK_FALSE(r.invariant_violation);
    for (const auto& [o, w] : r.outcomes) {
      MachineState s = ex::replay(*model, w);
      CHECK(model->is_terminal(s));
      CHECK(ex::outcome_of(t.program, s) == o);
    }
  }
  auto model = make_model(ModelKind::Sc, t.program);
  CHECK_THROWS_AS(ex::replay(*model, {RuleInstance{RuleKind::DeqSb, 0, 1024}}),
                  ContractViolation);
}
