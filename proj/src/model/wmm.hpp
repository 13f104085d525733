#pragma once

#include <optional>
#include <string>
#include <vector>

#include "models.hpp"

namespace i2e::model {

// WMM: PSO store buffers plus per-processor invalidation buffers of stale
// values, which let loads be reordered.
class WmmModel : public MemoryModel {
 public:
  using MemoryModel::MemoryModel;

  ModelKind kind() const override { return ModelKind::Wmm; }
  std::vector<RuleInstance> enabled(const MachineState& s) const override;
  MachineState fire(const MachineState& s,
                    const RuleInstance& r) const override;
  std::optional<std::string> check_transition(
      const MachineState& before, const RuleInstance& r,
      const MachineState& after) const override;
  std::string rule_name(const RuleInstance& r) const override;

 protected:
  // Rules that execute the instruction processor p decodes next.
  void instruction_rules(const MachineState& s, ProcId p,
                         std::vector<RuleInstance>& out) const;
  // Rules that move stores out of (or between) buffers.
  virtual void background_rules(const MachineState& s,
                                std::vector<RuleInstance>& out) const;
  virtual void fire_store(MachineState& n, ProcId p,
                          const isa::DecodedInstr& d) const;
  virtual void fire_background(MachineState& n, const RuleInstance& r) const;
};

}  // namespace i2e::model
