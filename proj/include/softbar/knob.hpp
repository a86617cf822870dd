#pragma once

#include "softbar/types.hpp"

namespace softbar {

/// Lobed knob mounted on a torque-controllable servo at the world origin:
/// a circular hub with n_lobes rectangular prongs. The mounting servo acts
/// as a torsional spring (recentered at each primitive start) plus a
/// Coulomb-style breakaway friction on the rotation axis.
struct KnobSpec {
  int n_lobes = 3;
  Real lobe_length = 0.05;      // radial extent beyond the hub surface? see outer_radius()
  Real lobe_half_width = 0.006;
  Real hub_radius = 0.015;
  Real torsional_stiffness = 0.0;   // N*m/rad
  Real rotational_friction = 0.005; // N*m breakaway torque
  Real start_angle = 0.5 * kPi;
  Real goal_angle = 0.0;

  Real outer_radius() const { return hub_radius + lobe_length; }

  bool valid() const {
    return n_lobes >= 1 && lobe_length > 0.0 && lobe_half_width > 0.0 &&
           hub_radius > 0.0 && torsional_stiffness >= 0.0 &&
           rotational_friction >= 0.0;
  }
  bool operator==(const KnobSpec&) const = default;
};

/// Penetration depth of a point (knob frame) into the knob silhouette;
/// zero outside. If grad is non-null it receives d(depth)/d(point).
Real knob_penetration(const KnobSpec& spec, const Vec2& point_knob_frame,
                      Vec2* grad = nullptr);

/// Penetration of a world-frame point into the knob rotated by `angle`.
/// Optional gradients w.r.t. the world point and the knob angle.
Real knob_penetration_world(const KnobSpec& spec, Real angle,
                            const Vec2& point_world, Vec2* grad_point = nullptr,
                            Real* grad_angle = nullptr);

}  // namespace softbar
