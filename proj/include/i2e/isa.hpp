#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "i2e/litmus.hpp"
#include "i2e/types.hpp"

namespace i2e::isa {

// Decoded instruction set: every operand is already evaluated.
enum class DecodedKind : std::uint8_t { Nm, Ld, St, Commit, Reconcile, Halt };

struct DecodedInstr {
  DecodedKind kind = DecodedKind::Halt;
  Address addr = 0;              // Ld, St
  std::optional<RegId> dst;      // Nm (absent for branches), Ld
  Value value = 0;               // Nm result, St data
  std::size_t next_pc = 0;       // pc after execute
  Tag tag = kNoTag;              // St under WMM-S, filled in by the model

  friend bool operator==(const DecodedInstr&, const DecodedInstr&) = default;
};

struct TimedDecode {
  DecodedInstr instr;
  Timestamp ts = 0;  // max timestamp over source registers, PC excluded
};

struct StoreEntry {
  Address addr = 0;
  Value value = 0;
  Timestamp ts = 0;  // creation time (WMM-D)
  Tag tag = kNoTag;  // WMM-S

  friend bool operator==(const StoreEntry&, const StoreEntry&) = default;
};

// Unbounded store buffer. Entries are kept in global age order (oldest
// first); the per-address order is the restriction of that order.
class StoreBuffer {
 public:
  void enq(StoreEntry e) { entries_.push_back(e); }
  StoreEntry deq();

  bool empty() const { return entries_.empty(); }
  bool exist(Address a) const;
  bool has(Tag t) const;

  std::optional<StoreEntry> youngest(Address a) const;
  std::optional<StoreEntry> oldest(Address a) const;
  StoreEntry rm_oldest(Address a);

  // One valid anyAddr() answer (address of the globally oldest store), or
  // nullopt for the empty buffer.
  std::optional<Address> any_addr() const;
  // Every answer anyAddr() could give, in first-appearance order.
  std::vector<Address> addresses() const;
  // Every answer random(a) could give, oldest first.
  std::vector<StoreEntry> entries_for(Address a) const;

  const std::vector<StoreEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  friend bool operator==(const StoreBuffer&, const StoreBuffer&) = default;

 private:
  std::vector<StoreEntry> entries_;
};

struct IbEntry {
  Address addr = 0;
  Value value = 0;
  Timestamp ts_lo = 0;     // tsL: visible to this processor from
  Timestamp ts_hi = 0;     // tsU: overwritten in memory at
  Timestamp inserted = 0;  // gts at insertion

  friend bool operator==(const IbEntry&, const IbEntry&) = default;
};

// Stale values a processor may still observe, in insertion order.
class InvalidationBuffer {
 public:
  void insert(Address a, Value v, Timestamp ts_lo = 0, Timestamp ts_hi = 0,
              Timestamp inserted = 0);
  void clear() { entries_.clear(); }
  void rm_addr(Address a);

  bool empty() const { return entries_.empty(); }
  bool exist(Address a) const;
  std::size_t count(Address a) const;

  // getRandom(a) with the random choice made explicit: `choice` indexes the
  // entries for `a` in insertion order. Entries for `a` inserted before the
  // chosen one are removed; the chosen one stays.
  Value get_random(Address a, std::size_t choice);

  // random(a) with an explicit choice; nullopt when `a` has no such entry.
  std::optional<IbEntry> random(Address a, std::size_t choice) const;

  // Removes entries for `a` inserted while gts < ts.
  void rm_older(Address a, Timestamp ts);

  std::vector<IbEntry> entries_for(Address a) const;
  const std::vector<IbEntry>& entries() const { return entries_; }

  friend bool operator==(const InvalidationBuffer&,
                         const InvalidationBuffer&) = default;

 private:
  std::vector<IbEntry> entries_;
};

struct ProcState {
  std::size_t pc = 0;
  std::vector<Value> regs;
  std::vector<Timestamp> reg_ts;
  Timestamp rts = 0;
  StoreBuffer sb;
  InvalidationBuffer ib;

  friend bool operator==(const ProcState&, const ProcState&) = default;
};

ProcState initial_proc(const litmus::ThreadCode& code);

// Pure: reads only the register state. When `reads` is given, every register
// consulted while evaluating operands is appended to it.
DecodedInstr decode(const litmus::ThreadCode& code, const ProcState& proc,
                    std::vector<RegId>* reads = nullptr);
TimedDecode decode_ts(const litmus::ThreadCode& code, const ProcState& proc);

// Writes the destination register and moves the pc. A Ld needs `ld_res`.
void execute(ProcState& proc, const DecodedInstr& ins,
             std::optional<Value> ld_res);
// execute, then stamps the destination register with `ts` if there is one.
void execute_ts(ProcState& proc, const DecodedInstr& ins,
                std::optional<Value> ld_res, std::optional<Timestamp> ts);

}  // namespace i2e::isa
