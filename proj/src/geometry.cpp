#include "softbar/geometry.hpp"

#include <cmath>

namespace softbar {

std::pair<Vec2, Vec2> base_points(const FiveBarGeometry& geom) {
  const Real h = 0.5 * geom.base_separation;
  return {Vec2(-h, 0.0), Vec2(h, 0.0)};
}

Vec2 proximal_direction(int servo_index, Real a) {
  // Mirror convention: angle 0 points away from the other servo.
  if (servo_index == 0) return Vec2(-std::cos(a), std::sin(a));
  return Vec2(std::cos(a), std::sin(a));
}

Vec2 knee_point(const FiveBarGeometry& geom, int servo_index, Real a) {
  const auto [b1, b2] = base_points(geom);
  const Vec2& base = servo_index == 0 ? b1 : b2;
  return base + geom.proximal_length * proximal_direction(servo_index, a);
}

namespace {

// Picks the perpendicular of the knee chord pointing to the tip_up side:
// positive y, ties broken toward positive x.
Vec2 chord_up_normal(const Vec2& chord) {
  Vec2 n = perp(chord).normalized();
  if (n.y() < 0.0 || (n.y() == 0.0 && n.x() < 0.0)) n = -n;
  return n;
}

FkResult fk_impl(const FiveBarGeometry& geom, Real theta1, Real theta2,
                 bool clamp_height) {
  FkResult res;
  res.knee1 = knee_point(geom, 0, theta1);
  res.knee2 = knee_point(geom, 1, theta2);
  const Vec2 chord = res.knee2 - res.knee1;
  const Real len = chord.norm();
  const Real d = geom.distal_length;
  if (len < 1e-12) {
    res.status = KinStatus::degenerate;
    return res;
  }
  const Real half = 0.5 * len;
  Real h2 = d * d - half * half;
  if (h2 < 0.0) {
    if (!clamp_height) {
      res.status = KinStatus::unreachable;
      return res;
    }
    h2 = 0.0;
  }
  const Real h = std::sqrt(h2);
  const Vec2 mid = res.knee1 + 0.5 * chord;
  const Vec2 n = chord_up_normal(chord);
  const Real side = geom.branch == Branch::tip_up ? 1.0 : -1.0;
  res.tip = mid + side * h * n;
  return res;
}

}  // namespace

FkResult forward_kinematics(const FiveBarGeometry& geom, Real theta1,
                            Real theta2) {
  return fk_impl(geom, theta1, theta2, false);
}

FkResult forward_kinematics_clamped(const FiveBarGeometry& geom, Real theta1,
                                    Real theta2) {
  return fk_impl(geom, theta1, theta2, true);
}

namespace {

// Intersection of circle(center, radius_a) toward `target` at radius_b from
// it; `side` picks the perpendicular sign. Assumes reachable.
Vec2 arm_knee(const Vec2& base, const Vec2& tip, Real p, Real d, Real side) {
  const Vec2 delta = tip - base;
  const Real len = delta.norm();
  const Real a = (p * p - d * d + len * len) / (2.0 * len);
  const Real h = std::sqrt(std::max(p * p - a * a, 0.0));
  const Vec2 u = delta / len;
  return base + a * u + side * h * perp(u);
}

Real servo_angle_from_knee(int servo_index, const Vec2& base,
                           const Vec2& knee, Real p) {
  const Vec2 dir = (knee - base) / p;
  if (servo_index == 0) return std::atan2(dir.y(), -dir.x());
  return std::atan2(dir.y(), dir.x());
}

}  // namespace

IkResult inverse_kinematics(const FiveBarGeometry& geom, const TipPose& tip) {
  IkResult res;
  const auto [b1, b2] = base_points(geom);
  const Real p = geom.proximal_length;
  const Real d = geom.distal_length;
  for (int i = 0; i < 2; ++i) {
    const Vec2& base = i == 0 ? b1 : b2;
    const Real len = (tip - base).norm();
    if (len > p + d || len < std::abs(p - d) || len == 0.0) {
      res.status = KinStatus::out_of_workspace;
      return res;
    }
  }
  // Working mode: knees outboard of the base-to-tip lines, mirrored between
  // the arms; tip_down flips both sides.
  const Real mode = geom.branch == Branch::tip_up ? 1.0 : -1.0;
  const Vec2 k1 = arm_knee(b1, tip, p, d, mode);
  const Vec2 k2 = arm_knee(b2, tip, p, d, -mode);
  res.theta1 = servo_angle_from_knee(0, b1, k1, p);
  res.theta2 = servo_angle_from_knee(1, b2, k2, p);
  if (!geom.servo_limits[0].contains(res.theta1) ||
      !geom.servo_limits[1].contains(res.theta2)) {
    res.status = KinStatus::limit_violation;
    return res;
  }
  return res;
}

std::array<Real, 3> interior_hinge_angles(const FiveBarGeometry& geom,
                                          const Vec2& knee1, const Vec2& tip,
                                          const Vec2& knee2) {
  const auto [b1, b2] = base_points(geom);
  // Traversal b1 -> k1 -> tip -> k2 -> b2 is clockwise for tip_up working
  // configurations; the interior angle is pi + turn there, pi - turn for the
  // mirrored branch. Smooth through straight-arm (turn = 0).
  const Real s = geom.branch == Branch::tip_up ? 1.0 : -1.0;
  const Vec2 e0 = knee1 - b1;
  const Vec2 e1 = tip - knee1;
  const Vec2 e2 = knee2 - tip;
  const Vec2 e3 = b2 - knee2;
  return {kPi + s * turn_angle(e0, e1), kPi + s * turn_angle(e1, e2),
          kPi + s * turn_angle(e2, e3)};
}

PassiveAnglesResult passive_joint_angles(const FiveBarGeometry& geom,
                                         Real theta1, Real theta2) {
  PassiveAnglesResult out;
  const FkResult fk = forward_kinematics(geom, theta1, theta2);
  if (!fk.ok()) {
    out.status = fk.status;
    return out;
  }
  out.config.theta1 = theta1;
  out.config.theta2 = theta2;
  out.config.passive = interior_hinge_angles(geom, fk.knee1, fk.tip, fk.knee2);
  return out;
}

bool workspace_contains(const FiveBarGeometry& geom, const TipPose& tip) {
  return inverse_kinematics(geom, tip).ok();
}

bool in_working_mode(const FiveBarGeometry& geom, Real theta1, Real theta2) {
  const FkResult fk = forward_kinematics(geom, theta1, theta2);
  if (!fk.ok()) return false;
  const auto [b1, b2] = base_points(geom);
  const Real mode = geom.branch == Branch::tip_up ? 1.0 : -1.0;
  const Real c1 = cross2(fk.tip - b1, fk.knee1 - b1);
  const Real c2 = cross2(fk.tip - b2, fk.knee2 - b2);
  return mode * c1 >= 0.0 && mode * c2 <= 0.0;
}

}  // namespace softbar
