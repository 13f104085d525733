#pragma once

#include <memory>

#include "i2e/machine.hpp"

namespace i2e::model {

std::unique_ptr<MemoryModel> make_sc(const litmus::Program& program);
std::unique_ptr<MemoryModel> make_tso(const litmus::Program& program);
std::unique_ptr<MemoryModel> make_pso(const litmus::Program& program);
std::unique_ptr<MemoryModel> make_wmm(const litmus::Program& program);
std::unique_ptr<MemoryModel> make_wmm_d(const litmus::Program& program);
std::unique_ptr<MemoryModel> make_wmm_s(const litmus::Program& program);

// sb/ib address exclusion shared by the WMM family.
std::optional<std::string> check_sb_ib_exclusion(const MemoryModel& m,
                                                 const MachineState& s);

}  // namespace i2e::model
