#pragma once

#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace fpnav::sim {

// Primitive step sizes and the success radius.
inline constexpr double kStepSize = 0.25;
inline constexpr double kTurnAngle = std::numbers::pi / 12.0;
inline constexpr double kSuccessDistance = 3.0;

enum class ActionKind { MoveForward, TurnLeft, TurnRight, Stop };

std::string_view to_string(ActionKind kind);
// Accepts the canonical names ("MoveForward", ...). Throws ParseError.
ActionKind action_kind_from_string(std::string_view name);

// Magnitude is meters for MoveForward, radians for turns and 0 for Stop.
struct Action {
  ActionKind kind = ActionKind::Stop;
  double magnitude = 0.0;

  static Action forward(double meters = kStepSize) { return {ActionKind::MoveForward, meters}; }
  static Action left(double radians = kTurnAngle) { return {ActionKind::TurnLeft, radians}; }
  static Action right(double radians = kTurnAngle) { return {ActionKind::TurnRight, radians}; }
  static Action stop() { return {ActionKind::Stop, 0.0}; }

  // Size of one primitive of this kind (0 for Stop).
  double primitive() const;
  bool is_primitive() const;

  friend bool operator==(const Action&, const Action&) = default;
};

// "move forward 75 cm", "turn left 30 degrees", "stop".
std::string describe(const Action& a);

}  // namespace fpnav::sim
