#include "wmm.hpp"

#include <string>

namespace i2e::model {

using isa::DecodedKind;

std::optional<std::string> check_sb_ib_exclusion(const MemoryModel& m,
                                                 const MachineState& s) {
  for (ProcId p = 0; p < s.procs.size(); ++p) {
    const auto& proc = s.procs[p];
    for (const isa::IbEntry& e : proc.ib.entries())
      if (proc.sb.exist(e.addr))
        return m.program().threads[p].name + " holds address " +
               std::to_string(e.addr) + " in both sb and ib";
  }
  return std::nullopt;
}

void WmmModel::instruction_rules(const MachineState& s, ProcId p,
                                 std::vector<RuleInstance>& out) const {
  const auto& proc = s.procs[p];
  auto d = decode(s, p);
  switch (d.kind) {
    case DecodedKind::Halt:
      return;
    case DecodedKind::Nm:
      out.push_back(RuleInstance{RuleKind::Nm, p});
      return;
    case DecodedKind::Ld:
      if (proc.sb.exist(d.addr)) {
        out.push_back(RuleInstance{RuleKind::LdSb, p});
        return;
      }
      out.push_back(RuleInstance{RuleKind::LdMem, p});
      for (std::size_t k = 0; k < proc.ib.count(d.addr); ++k) {
        RuleInstance r{RuleKind::LdIb, p};
        r.choice = k;
        out.push_back(r);
      }
      return;
    case DecodedKind::St:
      out.push_back(RuleInstance{RuleKind::St, p});
      return;
    case DecodedKind::Commit:
      if (proc.sb.empty()) out.push_back(RuleInstance{RuleKind::Commit, p});
      return;
    case DecodedKind::Reconcile:
      out.push_back(RuleInstance{RuleKind::Reconcile, p});
      return;
  }
}

void WmmModel::background_rules(const MachineState& s,
                                std::vector<RuleInstance>& out) const {
  for (ProcId p = 0; p < s.procs.size(); ++p)
    for (Address a : s.procs[p].sb.addresses())
      out.push_back(RuleInstance{RuleKind::DeqSb, p, a});
}

std::vector<RuleInstance> WmmModel::enabled(const MachineState& s) const {
  std::vector<RuleInstance> out;
  for (ProcId p = 0; p < s.procs.size(); ++p) instruction_rules(s, p, out);
  background_rules(s, out);
  return out;
}

void WmmModel::fire_store(MachineState& n, ProcId p,
                          const isa::DecodedInstr& d) const {
  auto& proc = n.procs[p];
  isa::execute(proc, d, std::nullopt);
  proc.sb.enq(isa::StoreEntry{d.addr, d.value});
  proc.ib.rm_addr(d.addr);
}

void WmmModel::fire_background(MachineState& n, const RuleInstance& r) const {
  Value old = n.read(r.addr);
  isa::StoreEntry e = n.procs[r.proc].sb.rm_oldest(r.addr);
  n.write(r.addr, MemCell{e.value});
  for (ProcId j = 0; j < n.procs.size(); ++j) {
    if (j == r.proc) continue;
    auto& other = n.procs[j];
    if (!other.sb.exist(r.addr)) other.ib.insert(r.addr, old);
  }
}

MachineState WmmModel::fire(const MachineState& s,
                            const RuleInstance& r) const {
  MachineState n = s;
  if (r.kind == RuleKind::DeqSb || r.kind == RuleKind::Copy) {
    fire_background(n, r);
    return n;
  }
  auto d = decode(s, r.proc);
  auto& proc = n.procs[r.proc];
  switch (r.kind) {
    case RuleKind::Nm:
    case RuleKind::Commit:
      isa::execute(proc, d, std::nullopt);
      break;
    case RuleKind::LdSb:
      isa::execute(proc, d, proc.sb.youngest(d.addr)->value);
      break;
    case RuleKind::LdMem:
      isa::execute(proc, d, s.read(d.addr));
      proc.ib.rm_addr(d.addr);
      break;
    case RuleKind::LdIb: {
      Value v = proc.ib.get_random(d.addr, r.choice);
      isa::execute(proc, d, v);
      break;
    }
    case RuleKind::St:
      fire_store(n, r.proc, d);
      break;
    case RuleKind::Reconcile:
      proc.ib.clear();
      isa::execute(proc, d, std::nullopt);
      break;
    default:
      throw ContractViolation("rule " + rule_name(r) + " does not exist in WMM");
  }
  return n;
}

std::optional<std::string> WmmModel::check_transition(
    const MachineState&, const RuleInstance&, const MachineState& after) const {
  return check_sb_ib_exclusion(*this, after);
}

std::string WmmModel::rule_name(const RuleInstance& r) const {
  switch (r.kind) {
    case RuleKind::Nm:
      return "WMM-Nm";
    case RuleKind::LdSb:
      return "WMM-LdSb";
    case RuleKind::LdMem:
      return "WMM-LdMem";
    case RuleKind::LdIb:
      return "WMM-LdIb";
    case RuleKind::St:
      return "WMM-St";
    case RuleKind::Commit:
      return "WMM-Com";
    case RuleKind::Reconcile:
      return "WMM-Rec";
    case RuleKind::DeqSb:
      return "WMM-DeqSb";
    default:
      return "WMM-?";
  }
}

std::unique_ptr<MemoryModel> make_wmm(const litmus::Program& program) {
  return std::make_unique<WmmModel>(program);
}

}  // namespace i2e::model
