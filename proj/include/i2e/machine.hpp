#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "i2e/isa.hpp"
#include "i2e/litmus.hpp"
#include "i2e/types.hpp"

namespace i2e {

// Monolithic memory cell. Only WMM-D reads writer/sts/mts.
struct MemCell {
  Value value = 0;
  ProcId writer = kNoProc;
  Timestamp sts = 0;
  Timestamp mts = 0;

  friend bool operator==(const MemCell&, const MemCell&) = default;
};

struct MachineState {
  // Cells equal to MemCell{} are never stored, so equal memories compare
  // equal regardless of history.
  std::map<Address, MemCell> memory;
  std::vector<isa::ProcState> procs;
  Timestamp gts = 0;
  Tag next_tag = 1;

  const MemCell& cell(Address a) const;
  Value read(Address a) const { return cell(a).value; }
  void write(Address a, const MemCell& c);

  friend bool operator==(const MachineState&, const MachineState&) = default;
};

enum class RuleKind : std::uint8_t {
  Nm,
  Ld,         // SC-Ld, TSO-Ld
  LdSb,
  LdMem,
  LdIb,
  St,
  Commit,
  Reconcile,
  DeqSb,
  Copy,
};

// One enabled rule firing, including the payload that resolves the rule's
// nondeterminism (ib entry, sb address, copy target).
struct RuleInstance {
  RuleKind kind = RuleKind::Nm;
  ProcId proc = 0;
  Address addr = 0;         // DeqSb, Copy
  std::size_t choice = 0;   // LdIb: index among ib entries for the address
  Tag tag = kNoTag;         // WMM-S DeqSb / Copy
  ProcId target = kNoProc;  // Copy

  friend auto operator<=>(const RuleInstance&, const RuleInstance&) = default;
  friend bool operator==(const RuleInstance&, const RuleInstance&) = default;
};

class MemoryModel {
 public:
  explicit MemoryModel(const litmus::Program& program) : program_(program) {}
  virtual ~MemoryModel() = default;

  MemoryModel(const MemoryModel&) = delete;
  MemoryModel& operator=(const MemoryModel&) = delete;

  virtual ModelKind kind() const = 0;
  virtual std::vector<RuleInstance> enabled(const MachineState& s) const = 0;
  // `r` must come from enabled(s).
  virtual MachineState fire(const MachineState& s,
                            const RuleInstance& r) const = 0;
  // fire, after checking `r` is enabled; throws ContractViolation otherwise.
  MachineState apply(const MachineState& s, const RuleInstance& r) const;

  // Structural invariants for one transition; returns a description of the
  // first violation found.
  virtual std::optional<std::string> check_transition(
      const MachineState& before, const RuleInstance& r,
      const MachineState& after) const;

  // Canonical rule name, e.g. "WMM-DeqSb".
  virtual std::string rule_name(const RuleInstance& r) const = 0;
  std::string describe(const RuleInstance& r) const;

  MachineState initial_state() const;
  bool is_terminal(const MachineState& s) const;
  bool all_halted(const MachineState& s) const;

  const litmus::Program& program() const { return program_; }

 protected:
  isa::DecodedInstr decode(const MachineState& s, ProcId p) const;
  isa::TimedDecode decode_ts(const MachineState& s, ProcId p) const;
  std::string proc_name(ProcId p) const;

 private:
  const litmus::Program& program_;
};

std::unique_ptr<MemoryModel> make_model(ModelKind kind,
                                        const litmus::Program& program);

namespace model {

// Partial coherence order for one address over the live stores in every
// store buffer: edge t1 -> t2 when some buffer holds t1 older than t2.
bool coherence_acyclic(const MachineState& s, Address a);

// Would copying tag `t` (address `a`) into processor `j`'s buffer as its
// youngest store keep the partial coherence order acyclic?
bool no_cycle(const MachineState& s, Address a, Tag t, ProcId j);

Timestamp load_value_timestamp(Timestamp ats, Timestamp rts, Timestamp vts);

}  // namespace model

}  // namespace i2e
