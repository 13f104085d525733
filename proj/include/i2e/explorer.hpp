#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "i2e/litmus.hpp"
#include "i2e/machine.hpp"

namespace i2e::explore {

struct ExploreLimits {
  std::size_t max_states = 5'000'000;
  std::size_t max_depth = 1'000'000;
  std::chrono::milliseconds time_budget{60'000};
};

enum class SearchOrder : std::uint8_t { Dfs, Bfs, Random };

using TransitionObserver = std::function<void(
    const MachineState& before, const RuleInstance& rule,
    const MachineState& after)>;

struct ExploreOptions {
  ExploreLimits limits;
  SearchOrder order = SearchOrder::Dfs;
  std::uint64_t seed = 0;
  bool dedup = true;
  bool witnesses = true;
  // Run MemoryModel::check_transition on every transition and fail the
  // exploration on the first violation.
  bool check_invariants = false;
  TransitionObserver observer;
};

using Witness = std::vector<RuleInstance>;

struct Stats {
  std::size_t states = 0;       // distinct states expanded
  std::size_t transitions = 0;  // rule firings
  std::size_t dedup_hits = 0;
  std::size_t max_frontier = 0;
  std::size_t max_depth = 0;
  std::chrono::microseconds wall{0};
};

enum class Status : std::uint8_t { Complete, Inconclusive };

struct ExploreResult {
  Status status = Status::Complete;
  std::string inconclusive_reason;
  // Exact when Complete; a lower bound when Inconclusive.
  std::map<litmus::Outcome, Witness> outcomes;
  Stats stats;
  // Non-terminal states without successors. Should never happen.
  std::vector<std::string> deadlocks;
  // First invariant violation, if check_invariants was on.
  std::optional<std::string> invariant_violation;

  bool complete() const { return status == Status::Complete; }
};

litmus::Outcome outcome_of(const litmus::Program& program,
                           const MachineState& s);

// Structural fingerprint; tags are renumbered by first appearance.
std::string canonical_key(const MachineState& s);

std::vector<std::pair<RuleInstance, MachineState>> successors(
    const MemoryModel& model, const MachineState& s);

ExploreResult explore(const MemoryModel& model,
                      const ExploreOptions& options = {});

// Applies `witness` from the initial state, checking every step is enabled.
MachineState replay(const MemoryModel& model, const Witness& witness);

struct CheckVerdict {
  litmus::Polarity polarity = litmus::Polarity::Forbidden;
  std::string condition;
  bool satisfiable = false;
  bool pass = false;
  std::optional<Witness> witness;
};

struct Verdict {
  ModelKind model = ModelKind::Sc;
  ExploreResult result;
  // Checks that apply to `model`; empty when the exploration is inconclusive
  // or the test has none for this model.
  std::vector<CheckVerdict> checks;

  bool inconclusive() const { return !result.complete(); }
  bool all_pass() const;
};

Verdict check(const litmus::BoundTest& test, ModelKind model,
              const ExploreOptions& options = {});

}  // namespace i2e::explore
