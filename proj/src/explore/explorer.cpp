#include "i2e/explorer.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <random>
#include <unordered_map>
#include <unordered_set>

namespace i2e::explore {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kMaxDeadlockReports = 8;

void put(std::string& out, std::uint64_t v) {
  char buf[sizeof v];
  std::memcpy(buf, &v, sizeof v);
  out.append(buf, sizeof v);
}

void put_signed(std::string& out, std::int64_t v) {
  put(out, static_cast<std::uint64_t>(v));
}

// Parent-pointer trace tree: node k was reached from node parent by rule.
struct TraceNode {
  std::size_t parent;
  RuleInstance rule;
};

constexpr std::size_t kRoot = static_cast<std::size_t>(-1);

Witness trace_to(const std::vector<TraceNode>& nodes, std::size_t k) {
  Witness w;
  for (; k != kRoot; k = nodes[k].parent) w.push_back(nodes[k].rule);
  std::reverse(w.begin(), w.end());
  return w;
}

struct Pending {
  MachineState state;
  std::size_t node;
  std::size_t depth;
};

}  // namespace

litmus::Outcome outcome_of(const litmus::Program& program,
                           const MachineState& s) {
  litmus::Outcome o;
  for (const isa::ProcState& p : s.procs) o.registers.push_back(p.regs);
  for (const auto& [name, addr] : program.addresses.entries())
    o.memory.push_back(s.read(addr));
  return o;
}

std::string canonical_key(const MachineState& s) {
  std::unordered_map<Tag, std::uint64_t> renumber;
  auto tag_id = [&](Tag t) -> std::uint64_t {
    if (t == kNoTag) return 0;
    auto [it, _] = renumber.try_emplace(t, renumber.size() + 1);
    return it->second;
  };

  std::string out;
  put(out, s.memory.size());
  for (const auto& [a, c] : s.memory) {
    put_signed(out, a);
    put_signed(out, c.value);
    put(out, c.writer);
    put(out, c.sts);
    put(out, c.mts);
  }
  put(out, s.procs.size());
  for (const isa::ProcState& p : s.procs) {
    put(out, p.pc);
    for (Value v : p.regs) put_signed(out, v);
    for (Timestamp t : p.reg_ts) put(out, t);
    put(out, p.rts);
    put(out, p.sb.size());
    for (const isa::StoreEntry& e : p.sb.entries()) {
      put_signed(out, e.addr);
      put_signed(out, e.value);
      put(out, e.ts);
      put(out, tag_id(e.tag));
    }
    put(out, p.ib.entries().size());
    for (const isa::IbEntry& e : p.ib.entries()) {
      put_signed(out, e.addr);
      put_signed(out, e.value);
      put(out, e.ts_lo);
      put(out, e.ts_hi);
      put(out, e.inserted);
    }
  }
  put(out, s.gts);
  return out;
}

std::vector<std::pair<RuleInstance, MachineState>> successors(
    const MemoryModel& model, const MachineState& s) {
  std::vector<std::pair<RuleInstance, MachineState>> out;
  for (const RuleInstance& r : model.enabled(s))
    out.emplace_back(r, model.fire(s, r));
  return out;
}

ExploreResult explore(const MemoryModel& model, const ExploreOptions& options) {
  const auto start = Clock::now();
  const auto& limits = options.limits;
  ExploreResult result;
  std::vector<TraceNode> nodes;
  std::unordered_set<std::string> seen;
  std::deque<Pending> frontier;
  std::mt19937_64 rng(options.seed);

  auto stop = [&](std::string reason) {
    result.status = Status::Inconclusive;
    result.inconclusive_reason = std::move(reason);
  };

  MachineState init = model.initial_state();
  if (options.dedup) seen.insert(canonical_key(init));
  frontier.push_back(Pending{std::move(init), kRoot, 0});

  while (!frontier.empty()) {
    result.stats.max_frontier =
        std::max(result.stats.max_frontier, frontier.size());
    if (options.order == SearchOrder::Random && frontier.size() > 1) {
      std::uniform_int_distribution<std::size_t> pick(0, frontier.size() - 1);
      std::swap(frontier[pick(rng)], frontier.back());
    }
    Pending cur;
    if (options.order == SearchOrder::Bfs) {
      cur = std::move(frontier.front());
      frontier.pop_front();
    } else {
      cur = std::move(frontier.back());
      frontier.pop_back();
    }

    if (result.stats.states >= limits.max_states) {
      stop("state limit of " + std::to_string(limits.max_states) + " reached");
      break;
    }
    if (result.stats.states % 256 == 0 &&
        Clock::now() - start > limits.time_budget) {
      stop("time budget of " + std::to_string(limits.time_budget.count()) +
           " ms exhausted");
      break;
    }
    ++result.stats.states;
    result.stats.max_depth = std::max(result.stats.max_depth, cur.depth);

    if (model.is_terminal(cur.state)) {
      auto outcome = outcome_of(model.program(), cur.state);
      if (!result.outcomes.contains(outcome))
        result.outcomes.emplace(std::move(outcome),
                                options.witnesses ? trace_to(nodes, cur.node)
                                                  : Witness{});
      continue;
    }

    auto rules = model.enabled(cur.state);
    if (rules.empty()) {
      if (result.deadlocks.size() < kMaxDeadlockReports) {
        std::string trace;
        for (const RuleInstance& r : trace_to(nodes, cur.node))
          trace += (trace.empty() ? "" : "; ") + model.describe(r);
        result.deadlocks.push_back("stuck after [" + trace + "]");
      }
      continue;
    }
    if (cur.depth >= limits.max_depth) {
      stop("depth limit of " + std::to_string(limits.max_depth) + " reached");
      break;
    }

    for (const RuleInstance& r : rules) {
      MachineState next = model.fire(cur.state, r);
      ++result.stats.transitions;
      if (options.observer) options.observer(cur.state, r, next);
      if (options.check_invariants) {
        if (auto v = model.check_transition(cur.state, r, next)) {
          result.invariant_violation = *v;
          stop("invariant violated: " + *v);
          break;
        }
      }
      if (options.dedup && !seen.insert(canonical_key(next)).second) {
        ++result.stats.dedup_hits;
        continue;
      }
      std::size_t node = kRoot;
      if (options.witnesses) {
        nodes.push_back(TraceNode{cur.node, r});
        node = nodes.size() - 1;
      }
      frontier.push_back(Pending{std::move(next), node, cur.depth + 1});
    }
    if (result.invariant_violation) break;
  }

  result.stats.wall = std::chrono::duration_cast<std::chrono::microseconds>(
      Clock::now() - start);
  return result;
}

MachineState replay(const MemoryModel& model, const Witness& witness) {
  MachineState s = model.initial_state();
  for (const RuleInstance& r : witness) s = model.apply(s, r);
  return s;
}

bool Verdict::all_pass() const {
  return !inconclusive() &&
         std::all_of(checks.begin(), checks.end(),
                     [](const CheckVerdict& c) { return c.pass; });
}

Verdict check(const litmus::BoundTest& test, ModelKind model,
              const ExploreOptions& options) {
  auto m = make_model(model, test.program);
  Verdict v;
  v.model = model;
  v.result = explore(*m, options);
  if (v.inconclusive()) return v;
  for (const litmus::BoundCheck& c : test.checks) {
    if (!c.applies_to(model)) continue;
    CheckVerdict cv;
    cv.polarity = c.polarity;
    cv.condition = c.text;
    for (const auto& [outcome, witness] : v.result.outcomes) {
      if (!litmus::eval_condition(c.cond, outcome)) continue;
      cv.satisfiable = true;
      if (options.witnesses) cv.witness = witness;
      break;
    }
    cv.pass = (c.polarity == litmus::Polarity::Allowed) == cv.satisfiable;
    v.checks.push_back(std::move(cv));
  }
  return v;
}

}  // namespace i2e::explore
