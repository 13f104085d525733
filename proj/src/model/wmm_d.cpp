#include <algorithm>
#include <string>
#include <vector>

#include "models.hpp"

namespace i2e::model {

namespace {

using isa::DecodedKind;

// WMM-D: WMM plus timestamps that keep a load from reading a value whose
// overwrite happened before the load's address became known.
class WmmDModel final : public MemoryModel {
 public:
  using MemoryModel::MemoryModel;

  ModelKind kind() const override { return ModelKind::WmmD; }

  std::vector<RuleInstance> enabled(const MachineState& s) const override {
    std::vector<RuleInstance> out;
    for (ProcId p = 0; p < s.procs.size(); ++p) {
      const auto& proc = s.procs[p];
      auto [d, ts] = decode_ts(s, p);
      switch (d.kind) {
        case DecodedKind::Halt:
          break;
        case DecodedKind::Nm:
          out.push_back(RuleInstance{RuleKind::Nm, p});
          break;
        case DecodedKind::Ld: {
          if (proc.sb.exist(d.addr)) {
            out.push_back(RuleInstance{RuleKind::LdSb, p});
            break;
          }
          out.push_back(RuleInstance{RuleKind::LdMem, p});
          auto stale = proc.ib.entries_for(d.addr);
          for (std::size_t k = 0; k < stale.size(); ++k) {
            if (ts > stale[k].ts_hi) continue;
            RuleInstance r{RuleKind::LdIb, p};
            r.choice = k;
            out.push_back(r);
          }
          break;
        }
        case DecodedKind::St:
          out.push_back(RuleInstance{RuleKind::St, p});
          break;
        case DecodedKind::Commit:
          if (proc.sb.empty()) out.push_back(RuleInstance{RuleKind::Commit, p});
          break;
        case DecodedKind::Reconcile:
          out.push_back(RuleInstance{RuleKind::Reconcile, p});
          break;
      }
      for (Address a : proc.sb.addresses())
        out.push_back(RuleInstance{RuleKind::DeqSb, p, a});
    }
    return out;
  }

  MachineState fire(const MachineState& s,
                    const RuleInstance& r) const override {
    MachineState n = s;
    if (r.kind == RuleKind::DeqSb) {
      dequeue(n, r);
      return n;
    }
    auto [d, ts] = decode_ts(s, r.proc);
    auto& proc = n.procs[r.proc];
    switch (r.kind) {
      case RuleKind::Nm:
        isa::execute_ts(proc, d, std::nullopt, ts);
        break;
      case RuleKind::LdSb: {
        auto y = *proc.sb.youngest(d.addr);
        isa::execute_ts(proc, d, y.value,
                        load_value_timestamp(ts, proc.rts, y.ts));
        break;
      }
      case RuleKind::LdMem: {
        const MemCell& c = s.cell(d.addr);
        Timestamp vts = c.writer != r.proc ? c.mts : c.sts;
        isa::execute_ts(proc, d, c.value,
                        load_value_timestamp(ts, proc.rts, vts));
        proc.ib.rm_addr(d.addr);
        break;
      }
      case RuleKind::LdIb: {
        isa::IbEntry e = *proc.ib.random(d.addr, r.choice);
        isa::execute_ts(proc, d, e.value,
                        load_value_timestamp(ts, proc.rts, e.ts_lo));
        proc.ib.rm_older(d.addr, e.ts_hi);
        break;
      }
      case RuleKind::St:
        isa::execute_ts(proc, d, std::nullopt, std::nullopt);
        proc.sb.enq(isa::StoreEntry{d.addr, d.value, ts});
        proc.ib.rm_addr(d.addr);
        break;
      case RuleKind::Commit:
        isa::execute_ts(proc, d, std::nullopt, std::nullopt);
        break;
      case RuleKind::Reconcile:
        isa::execute_ts(proc, d, std::nullopt, std::nullopt);
        proc.ib.clear();
        proc.rts = s.gts;
        break;
      default:
        throw ContractViolation("rule " + rule_name(r) +
                                " does not exist in WMM-D");
    }
    return n;
  }

  std::optional<std::string> check_transition(
      const MachineState& before, const RuleInstance& r,
      const MachineState& after) const override {
    if (auto v = check_sb_ib_exclusion(*this, after)) return v;

    Timestamp step = after.gts - before.gts;
    Timestamp want = r.kind == RuleKind::DeqSb ? 1 : 0;
    if (after.gts < before.gts || step != want)
      return "gts moved by " + std::to_string(after.gts - before.gts) +
             " on " + describe(r);

    Timestamp bound = after.gts + 1;
    auto over = [&](Timestamp t) { return t > bound; };
    for (const auto& [a, c] : after.memory)
      if (over(c.sts) || over(c.mts))
        return "memory timestamp beyond gts+1 at " + std::to_string(a);
    for (ProcId p = 0; p < after.procs.size(); ++p) {
      const auto& proc = after.procs[p];
      if (over(proc.rts) ||
          std::any_of(proc.reg_ts.begin(), proc.reg_ts.end(), over))
        return proc_name(p) + " holds a register timestamp beyond gts+1";
      for (const isa::StoreEntry& e : proc.sb.entries())
        if (over(e.ts)) return proc_name(p) + " sb timestamp beyond gts+1";
      for (const isa::IbEntry& e : proc.ib.entries()) {
        if (e.ts_lo > e.ts_hi)
          return proc_name(p) + " ib entry with tsL > tsU";
        if (over(e.ts_hi)) return proc_name(p) + " ib timestamp beyond gts+1";
      }
    }

    if (r.kind == RuleKind::LdSb || r.kind == RuleKind::LdMem ||
        r.kind == RuleKind::LdIb) {
      auto [d, ats] = decode_ts(before, r.proc);
      const auto& pb = before.procs[r.proc];
      Timestamp got = after.procs[r.proc].reg_ts.at(*d.dst);
      if (got < ats || got < pb.rts)
        return describe(r) + " produced a timestamp below ats or rts";
      if (r.kind == RuleKind::LdIb &&
          got > pb.ib.random(d.addr, r.choice)->ts_hi)
        return describe(r) + " read a value overwritten before its timestamp";
    }
    return std::nullopt;
  }

  std::string rule_name(const RuleInstance& r) const override {
    switch (r.kind) {
      case RuleKind::Nm:
        return "WMM-D-Nm";
      case RuleKind::LdSb:
        return "WMM-D-LdSb";
      case RuleKind::LdMem:
        return "WMM-D-LdMem";
      case RuleKind::LdIb:
        return "WMM-D-LdIb";
      case RuleKind::St:
        return "WMM-D-St";
      case RuleKind::Commit:
        return "WMM-D-Com";
      case RuleKind::Reconcile:
        return "WMM-D-Rec";
      case RuleKind::DeqSb:
        return "WMM-D-DeqSb";
      default:
        return "WMM-D-?";
    }
  }

 private:
  void dequeue(MachineState& n, const RuleInstance& r) const {
    const MemCell old = n.cell(r.addr);
    Timestamp ts_hi = n.gts;
    isa::StoreEntry e = n.procs[r.proc].sb.rm_oldest(r.addr);
    n.write(r.addr, MemCell{e.value, r.proc, e.ts, n.gts + 1});
    n.gts += 1;
    for (ProcId j = 0; j < n.procs.size(); ++j) {
      if (j == r.proc) continue;
      auto& other = n.procs[j];
      if (other.sb.exist(r.addr)) continue;
      Timestamp ts_lo = j != old.writer ? old.mts : old.sts;
      other.ib.insert(r.addr, old.value, ts_lo, ts_hi, ts_hi);
    }
  }
};

}  // namespace

std::unique_ptr<MemoryModel> make_wmm_d(const litmus::Program& program) {
  return std::make_unique<WmmDModel>(program);
}

}  // namespace i2e::model
