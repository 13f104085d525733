#include <algorithm>
#include <cstdint>
#include <string>

#include "i2e/isa.hpp"

namespace i2e::isa {

namespace {

Value eval(const litmus::BoundExpr& e, const ProcState& proc,
           std::vector<RegId>* reads) {
  // Two's-complement wraparound instead of signed overflow.
  std::uint64_t sum = 0;
  for (const litmus::BoundTerm& t : e.terms) {
    Value v = t.constant;
    if (t.is_register) {
      v = proc.regs.at(t.reg);
      if (reads) reads->push_back(t.reg);
    }
    std::uint64_t u = static_cast<std::uint64_t>(v);
    sum = t.negated ? sum - u : sum + u;
  }
  return static_cast<Value>(sum);
}

Address eval_address(const litmus::ThreadCode& code, std::size_t pc,
                     const litmus::BoundExpr& e, const ProcState& proc,
                     std::vector<RegId>* reads) {
  Value a = eval(e, proc, reads);
  if (a < 0)
    throw ModelError(code.name + " instruction " + std::to_string(pc + 1) +
                     " computes negative address " + std::to_string(a));
  return a;
}

}  // namespace

ProcState initial_proc(const litmus::ThreadCode& code) {
  ProcState p;
  p.regs.assign(code.registers.size(), 0);
  p.reg_ts.assign(code.registers.size(), 0);
  return p;
}

DecodedInstr decode(const litmus::ThreadCode& code, const ProcState& proc,
                    std::vector<RegId>* reads) {
  DecodedInstr d;
  d.next_pc = proc.pc;
  if (proc.pc >= code.ops.size()) return d;

  const litmus::Op& op = code.ops[proc.pc];
  d.next_pc = proc.pc + 1;
  switch (op.kind) {
    case litmus::Op::Kind::Assign:
      d.kind = DecodedKind::Nm;
      d.dst = op.dst;
      d.value = eval(op.a, proc, reads);
      break;
    case litmus::Op::Kind::Load:
      d.kind = DecodedKind::Ld;
      d.dst = op.dst;
      d.addr = eval_address(code, proc.pc, op.a, proc, reads);
      break;
    case litmus::Op::Kind::Store:
      d.kind = DecodedKind::St;
      d.addr = eval_address(code, proc.pc, op.a, proc, reads);
      d.value = eval(op.b, proc, reads);
      break;
    case litmus::Op::Kind::Fence:
      d.kind = op.fence == litmus::FenceKind::Commit ? DecodedKind::Commit
                                                     : DecodedKind::Reconcile;
      break;
    case litmus::Op::Kind::Branch: {
      d.kind = DecodedKind::Nm;
      Value lhs = eval(op.a, proc, reads);
      Value rhs = eval(op.b, proc, reads);
      bool taken = (lhs == rhs) == (op.cond == litmus::BranchCond::Eq);
      if (taken) d.next_pc = op.target;
      break;
    }
    case litmus::Op::Kind::Exit:
      d = DecodedInstr{};
      d.next_pc = proc.pc;
      break;
  }
  return d;
}

TimedDecode decode_ts(const litmus::ThreadCode& code, const ProcState& proc) {
  std::vector<RegId> reads;
  TimedDecode out;
  out.instr = decode(code, proc, &reads);
  for (RegId r : reads) out.ts = std::max(out.ts, proc.reg_ts.at(r));
  return out;
}

void execute(ProcState& proc, const DecodedInstr& ins,
             std::optional<Value> ld_res) {
  switch (ins.kind) {
    case DecodedKind::Halt:
      throw ContractViolation("execute on Halt");
    case DecodedKind::Ld:
      if (!ld_res) throw ContractViolation("Ld executed without a load result");
      proc.regs.at(*ins.dst) = *ld_res;
      break;
    case DecodedKind::Nm:
      if (ins.dst) proc.regs.at(*ins.dst) = ins.value;
      break;
    case DecodedKind::St:
    case DecodedKind::Commit:
    case DecodedKind::Reconcile:
      break;
  }
  proc.pc = ins.next_pc;
}

void execute_ts(ProcState& proc, const DecodedInstr& ins,
                std::optional<Value> ld_res, std::optional<Timestamp> ts) {
  execute(proc, ins, ld_res);
  if (ins.dst && ts) proc.reg_ts.at(*ins.dst) = *ts;
}

}  // namespace i2e::isa
