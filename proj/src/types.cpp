#include "i2e/types.hpp"

namespace i2e {

std::string_view model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Sc:
      return "sc";
    case ModelKind::Tso:
      return "tso";
    case ModelKind::Pso:
      return "pso";
    case ModelKind::Wmm:
      return "wmm";
    case ModelKind::WmmD:
      return "wmm-d";
    case ModelKind::WmmS:
      return "wmm-s";
  }
  return "?";
}

std::optional<ModelKind> parse_model(std::string_view name) {
  for (ModelKind m : kAllModels)
    if (model_name(m) == name) return m;
  return std::nullopt;
}

}  // namespace i2e
