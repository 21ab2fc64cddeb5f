#include "fpnav/sim/action.hpp"

#include <cmath>

#include "fpnav/error.hpp"

namespace fpnav::sim {

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::MoveForward: return "MoveForward";
    case ActionKind::TurnLeft: return "TurnLeft";
    case ActionKind::TurnRight: return "TurnRight";
    case ActionKind::Stop: return "Stop";
  }
  return "Stop";
}

ActionKind action_kind_from_string(std::string_view name) {
  if (name == "MoveForward") return ActionKind::MoveForward;
  if (name == "TurnLeft") return ActionKind::TurnLeft;
  if (name == "TurnRight") return ActionKind::TurnRight;
  if (name == "Stop") return ActionKind::Stop;
  throw ParseError("unknown action \"" + std::string(name) + "\"");
}

double Action::primitive() const {
  switch (kind) {
    case ActionKind::MoveForward: return kStepSize;
    case ActionKind::TurnLeft:
    case ActionKind::TurnRight: return kTurnAngle;
    case ActionKind::Stop: return 0.0;
  }
  return 0.0;
}

bool Action::is_primitive() const {
  if (kind == ActionKind::Stop) return true;
  return std::abs(magnitude - primitive()) <= 1e-9;
}

std::string describe(const Action& a) {
  switch (a.kind) {
    case ActionKind::MoveForward:
      return "move forward " + std::to_string(std::lround(a.magnitude * 100.0)) + " cm";
    case ActionKind::TurnLeft:
      return "turn left " + std::to_string(std::lround(a.magnitude * 180.0 / std::numbers::pi)) + " degrees";
    case ActionKind::TurnRight:
      return "turn right " + std::to_string(std::lround(a.magnitude * 180.0 / std::numbers::pi)) + " degrees";
    case ActionKind::Stop: return "stop";
  }
  return "stop";
}

}  // namespace fpnav::sim
