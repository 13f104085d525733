#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace i2e {

using Value = std::int64_t;
using Address = std::int64_t;
using RegId = std::uint32_t;
using ProcId = std::uint32_t;
using Timestamp = std::uint64_t;

// Store identity shared by every copy of a store (WMM-S). Zero means "no tag".
using Tag = std::uint64_t;

inline constexpr ProcId kNoProc = std::numeric_limits<ProcId>::max();
inline constexpr Tag kNoTag = 0;

enum class ModelKind : std::uint8_t { Sc, Tso, Pso, Wmm, WmmD, WmmS };

inline constexpr std::array<ModelKind, 6> kAllModels = {
    ModelKind::Sc,  ModelKind::Tso,  ModelKind::Pso,
    ModelKind::Wmm, ModelKind::WmmD, ModelKind::WmmS};

std::string_view model_name(ModelKind kind);
std::optional<ModelKind> parse_model(std::string_view name);

// Raised when a program does something the machine cannot represent, e.g. a
// load from a negative address. Signals a bad litmus test, not an engine bug.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised on misuse of an internal contract (deq on an empty buffer, applying a
// rule that is not enabled, ...). Always an engine bug.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace i2e
