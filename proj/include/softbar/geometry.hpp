#pragma once

#include <array>
#include <utility>

#include "softbar/types.hpp"

namespace softbar {

/// Working mode of the closed chain: which side of the knee-to-knee chord
/// the tip lies on.
enum class Branch { tip_up, tip_down };

struct ServoLimits {
  Real lo = 0.0;
  Real hi = kPi;

  Real clamp(Real a) const { return a < lo ? lo : (a > hi ? hi : a); }
  bool contains(Real a) const { return a >= lo && a <= hi; }
  Real mid() const { return lo + 0.5 * (hi - lo); }
  bool operator==(const ServoLimits&) const = default;
};

/// Symmetric planar five-bar: two servo-driven proximal links on a common
/// base line, two distal links meeting at the tip. Base frame origin is the
/// midpoint between the servo axes, x along the line connecting them.
///
/// Servo angles use a mirror convention: servo 0 (at -x) is measured
/// counterclockwise from +x, servo 1 (at +x) clockwise from -x, with angle 0
/// pointing away from the other servo. Equal angles give a mirror-symmetric
/// configuration.
struct FiveBarGeometry {
  Real base_separation = 0.04;
  Real proximal_length = 0.06;
  Real distal_length = 0.08;
  std::array<ServoLimits, 2> servo_limits{ServoLimits{0.0, kPi},
                                          ServoLimits{0.0, kPi}};
  Branch branch = Branch::tip_up;

  bool valid() const {
    return base_separation > 0.0 && proximal_length > 0.0 &&
           distal_length > 0.0 && servo_limits[0].lo < servo_limits[0].hi &&
           servo_limits[1].lo < servo_limits[1].hi;
  }
  bool operator==(const FiveBarGeometry&) const = default;
};

using TipPose = Vec2;

/// Full joint state: the two actuated angles plus the three passive hinge
/// angles (left knee, tip, right knee) as interior angles of the closed loop.
struct JointConfiguration {
  Real theta1 = 0.0;
  Real theta2 = 0.0;
  std::array<Real, 3> passive{0.0, 0.0, 0.0};
};

enum class KinStatus {
  ok,
  unreachable,       // distal circles do not intersect
  degenerate,        // knee points coincide
  out_of_workspace,  // no inverse solution exists
  limit_violation,   // inverse solution exists but violates servo limits
};

struct FkResult {
  KinStatus status = KinStatus::ok;
  TipPose tip = TipPose::Zero();
  Vec2 knee1 = Vec2::Zero();
  Vec2 knee2 = Vec2::Zero();
  bool ok() const { return status == KinStatus::ok; }
};

struct IkResult {
  KinStatus status = KinStatus::ok;
  Real theta1 = 0.0;
  Real theta2 = 0.0;
  bool ok() const { return status == KinStatus::ok; }
};

/// Servo axis positions in the base frame.
std::pair<Vec2, Vec2> base_points(const FiveBarGeometry& geom);

/// Unit direction of proximal link i at servo angle a (mirror convention).
Vec2 proximal_direction(int servo_index, Real a);

/// Knee (proximal/distal hinge) position for servo i at angle a.
Vec2 knee_point(const FiveBarGeometry& geom, int servo_index, Real a);

/// Tip position of the rigid skeleton. Exact circle tangency is treated as
/// reachable (closed workspace boundary).
FkResult forward_kinematics(const FiveBarGeometry& geom, Real theta1,
                            Real theta2);

/// Like forward_kinematics but clamps the chord half-height to zero when the
/// knees are farther apart than the distal links allow, yielding the
/// minimal-stretch tip on the knee line. Always succeeds for distinct knees.
FkResult forward_kinematics_clamped(const FiveBarGeometry& geom, Real theta1,
                                    Real theta2);

/// Servo angles reproducing `tip`, choosing the per-arm elbow solutions of
/// the working mode selected by geom.branch.
IkResult inverse_kinematics(const FiveBarGeometry& geom, const TipPose& tip);

/// Interior angles (left knee, tip, right knee) of the closed loop at the
/// given vertex positions, smooth through straight-arm configurations.
std::array<Real, 3> interior_hinge_angles(const FiveBarGeometry& geom,
                                          const Vec2& knee1, const Vec2& tip,
                                          const Vec2& knee2);

struct PassiveAnglesResult {
  KinStatus status = KinStatus::ok;
  JointConfiguration config;
  bool ok() const { return status == KinStatus::ok; }
};

PassiveAnglesResult passive_joint_angles(const FiveBarGeometry& geom,
                                         Real theta1, Real theta2);

/// True iff inverse_kinematics succeeds (reachability and servo limits).
bool workspace_contains(const FiveBarGeometry& geom, const TipPose& tip);

/// True when the configuration is in the canonical working mode that
/// inverse_kinematics selects (per-arm elbow sides consistent with branch).
bool in_working_mode(const FiveBarGeometry& geom, Real theta1, Real theta2);

}  // namespace softbar
