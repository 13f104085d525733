#include <string>
#include <vector>

#include "models.hpp"

namespace i2e::model {

namespace {

using isa::DecodedKind;

RuleKind instruction_rule(DecodedKind k) {
  switch (k) {
    case DecodedKind::Nm:
      return RuleKind::Nm;
    case DecodedKind::Ld:
      return RuleKind::Ld;
    case DecodedKind::St:
      return RuleKind::St;
    case DecodedKind::Commit:
      return RuleKind::Commit;
    case DecodedKind::Reconcile:
      return RuleKind::Reconcile;
    case DecodedKind::Halt:
      break;
  }
  throw ContractViolation("no rule executes Halt");
}

// SC: loads and stores go straight to the monolithic memory. Commit and
// Reconcile are accepted as no-ops so one litmus file runs everywhere.
class ScModel final : public MemoryModel {
 public:
  using MemoryModel::MemoryModel;

  ModelKind kind() const override { return ModelKind::Sc; }

  std::vector<RuleInstance> enabled(const MachineState& s) const override {
    std::vector<RuleInstance> out;
    for (ProcId p = 0; p < s.procs.size(); ++p) {
      auto d = decode(s, p);
      if (d.kind == DecodedKind::Halt) continue;
      out.push_back(RuleInstance{instruction_rule(d.kind), p});
    }
    return out;
  }

  MachineState fire(const MachineState& s,
                    const RuleInstance& r) const override {
    MachineState n = s;
    auto d = decode(s, r.proc);
    auto& proc = n.procs[r.proc];
    switch (d.kind) {
      case DecodedKind::Ld:
        isa::execute(proc, d, s.read(d.addr));
        break;
      case DecodedKind::St:
        isa::execute(proc, d, std::nullopt);
        n.write(d.addr, MemCell{d.value});
        break;
      default:
        isa::execute(proc, d, std::nullopt);
        break;
    }
    return n;
  }

  std::string rule_name(const RuleInstance& r) const override {
    switch (r.kind) {
      case RuleKind::Nm:
        return "SC-Nm";
      case RuleKind::Ld:
        return "SC-Ld";
      case RuleKind::St:
        return "SC-St";
      case RuleKind::Commit:
        return "SC-Com";
      case RuleKind::Reconcile:
        return "SC-Rec";
      default:
        return "SC-?";
    }
  }
};

// TSO and PSO differ only in which store may leave the buffer.
class BufferedModel final : public MemoryModel {
 public:
  BufferedModel(const litmus::Program& program, bool partial)
      : MemoryModel(program), partial_(partial) {}

  ModelKind kind() const override {
    return partial_ ? ModelKind::Pso : ModelKind::Tso;
  }

  std::vector<RuleInstance> enabled(const MachineState& s) const override {
    std::vector<RuleInstance> out;
    for (ProcId p = 0; p < s.procs.size(); ++p) {
      const auto& proc = s.procs[p];
      auto d = decode(s, p);
      if (d.kind != DecodedKind::Halt &&
          (d.kind != DecodedKind::Commit || proc.sb.empty()))
        out.push_back(RuleInstance{instruction_rule(d.kind), p});
      if (proc.sb.empty()) continue;
      if (partial_) {
        for (Address a : proc.sb.addresses())
          out.push_back(RuleInstance{RuleKind::DeqSb, p, a});
      } else {
        out.push_back(RuleInstance{RuleKind::DeqSb, p, *proc.sb.any_addr()});
      }
    }
    return out;
  }

  MachineState fire(const MachineState& s,
                    const RuleInstance& r) const override {
    MachineState n = s;
    auto& proc = n.procs[r.proc];
    if (r.kind == RuleKind::DeqSb) {
      isa::StoreEntry e = partial_ ? proc.sb.rm_oldest(r.addr) : proc.sb.deq();
      n.write(e.addr, MemCell{e.value});
      return n;
    }
    auto d = decode(s, r.proc);
    switch (d.kind) {
      case DecodedKind::Ld: {
        auto y = proc.sb.youngest(d.addr);
        isa::execute(proc, d, y ? y->value : s.read(d.addr));
        break;
      }
      case DecodedKind::St:
        isa::execute(proc, d, std::nullopt);
        proc.sb.enq(isa::StoreEntry{d.addr, d.value});
        break;
      default:
        isa::execute(proc, d, std::nullopt);
        break;
    }
    return n;
  }

  std::string rule_name(const RuleInstance& r) const override {
    switch (r.kind) {
      case RuleKind::Nm:
        return "TSO-Nm";
      case RuleKind::Ld:
        return "TSO-Ld";
      case RuleKind::St:
        return "TSO-St";
      case RuleKind::Commit:
        return "TSO-Com";
      case RuleKind::Reconcile:
        return "TSO-Rec";
      case RuleKind::DeqSb:
        return partial_ ? "PSO-DeqSb" : "TSO-DeqSb";
      default:
        return "TSO-?";
    }
  }

 private:
  bool partial_;
};

}  // namespace

std::unique_ptr<MemoryModel> make_sc(const litmus::Program& program) {
  return std::make_unique<ScModel>(program);
}

std::unique_ptr<MemoryModel> make_tso(const litmus::Program& program) {
  return std::make_unique<BufferedModel>(program, false);
}

std::unique_ptr<MemoryModel> make_pso(const litmus::Program& program) {
  return std::make_unique<BufferedModel>(program, true);
}

}  // namespace i2e::model

namespace i2e {

std::unique_ptr<MemoryModel> make_model(ModelKind kind,
                                        const litmus::Program& program) {
  switch (kind) {
    case ModelKind::Sc:
      return model::make_sc(program);
    case ModelKind::Tso:
      return model::make_tso(program);
    case ModelKind::Pso:
      return model::make_pso(program);
    case ModelKind::Wmm:
      return model::make_wmm(program);
    case ModelKind::WmmD:
      return model::make_wmm_d(program);
    case ModelKind::WmmS:
      return model::make_wmm_s(program);
  }
  throw ContractViolation("unknown model kind");
}

}  // namespace i2e
