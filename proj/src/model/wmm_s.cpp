#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "wmm.hpp"

namespace i2e::model {

namespace {

// WMM-S: stores are tagged, may be copied between store buffers before
// reaching memory, and reach memory only once every copy is oldest.
class WmmSModel final : public WmmModel {
 public:
  using WmmModel::WmmModel;

  ModelKind kind() const override { return ModelKind::WmmS; }

  std::optional<std::string> check_transition(
      const MachineState& before, const RuleInstance& r,
      const MachineState& after) const override {
    if (auto v = check_sb_ib_exclusion(*this, after)) return v;
    std::set<Address> addrs;
    for (ProcId p = 0; p < after.procs.size(); ++p) {
      std::set<Tag> seen;
      for (const isa::StoreEntry& e : after.procs[p].sb.entries()) {
        if (!seen.insert(e.tag).second)
          return proc_name(p) + " holds tag " + std::to_string(e.tag) +
                 " twice";
        addrs.insert(e.addr);
      }
    }
    for (Address a : addrs)
      if (!coherence_acyclic(after, a))
        return "coherence order for address " + std::to_string(a) +
               " has a cycle after " + describe(r);
    if (r.kind == RuleKind::DeqSb)
      for (const isa::ProcState& p : after.procs)
        if (p.sb.has(r.tag))
          return "tag " + std::to_string(r.tag) + " still buffered after " +
                 describe(r);
    (void)before;
    return std::nullopt;
  }

  std::string rule_name(const RuleInstance& r) const override {
    switch (r.kind) {
      case RuleKind::St:
        return "WMM-S-St";
      case RuleKind::DeqSb:
        return "WMM-S-DeqSb";
      case RuleKind::Copy:
        return "WMM-S-Copy";
      default:
        return WmmModel::rule_name(r);
    }
  }

 protected:
  void background_rules(const MachineState& s,
                        std::vector<RuleInstance>& out) const override {
    // Every copy of a tag behaves identically, so one instance per tag (and
    // per target for Copy) is enough; the first holder names the rule.
    std::map<Tag, std::pair<ProcId, isa::StoreEntry>> live;
    for (ProcId p = 0; p < s.procs.size(); ++p)
      for (const isa::StoreEntry& e : s.procs[p].sb.entries())
        live.try_emplace(e.tag, p, e);

    for (const auto& [t, holder] : live) {
      const auto& [p, e] = holder;
      bool oldest_everywhere = std::all_of(
          s.procs.begin(), s.procs.end(), [&](const isa::ProcState& q) {
            return !q.sb.has(t) || q.sb.oldest(e.addr)->tag == t;
          });
      if (oldest_everywhere) {
        RuleInstance r{RuleKind::DeqSb, p, e.addr};
        r.tag = t;
        out.push_back(r);
      }
    }
    for (const auto& [t, holder] : live) {
      const auto& [p, e] = holder;
      for (ProcId j = 0; j < s.procs.size(); ++j) {
        if (!no_cycle(s, e.addr, t, j)) continue;
        RuleInstance r{RuleKind::Copy, p, e.addr};
        r.tag = t;
        r.target = j;
        out.push_back(r);
      }
    }
  }

  void fire_store(MachineState& n, ProcId p,
                  const isa::DecodedInstr& d) const override {
    auto& proc = n.procs[p];
    isa::execute(proc, d, std::nullopt);
    proc.sb.enq(isa::StoreEntry{d.addr, d.value, 0, n.next_tag++});
    proc.ib.rm_addr(d.addr);
  }

  void fire_background(MachineState& n, const RuleInstance& r) const override {
    if (r.kind == RuleKind::Copy) {
      isa::StoreEntry e = *n.procs[r.proc].sb.youngest(r.addr);
      for (const isa::StoreEntry& c : n.procs[r.proc].sb.entries_for(r.addr))
        if (c.tag == r.tag) e = c;
      auto& target = n.procs[r.target];
      target.sb.enq(e);
      target.ib.rm_addr(r.addr);
      return;
    }
    Value old = n.read(r.addr);
    Value v = n.procs[r.proc].sb.oldest(r.addr)->value;
    n.write(r.addr, MemCell{v});
    for (isa::ProcState& q : n.procs) {
      if (q.sb.has(r.tag)) {
        q.sb.rm_oldest(r.addr);
      } else if (!q.sb.exist(r.addr)) {
        q.ib.insert(r.addr, old);
      }
    }
  }
};

}  // namespace

std::unique_ptr<MemoryModel> make_wmm_s(const litmus::Program& program) {
  return std::make_unique<WmmSModel>(program);
}

}  // namespace i2e::model
