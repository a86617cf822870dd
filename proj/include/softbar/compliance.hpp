#pragma once

#include <array>
#include <functional>
#include <string>

#include "softbar/geometry.hpp"
#include "softbar/types.hpp"

namespace softbar {

struct MaterialProfile {
  std::string name;
  std::array<Real, 3> hinge_stiffness{0.5, 0.5, 0.5};  // N*m/rad
  Real link_axial_stiffness = 2000.0;                  // N/m
  Real creep_rate = 1e-5;       // per quasistatic sub-step, in [0, 1)
  Real transition_noise = 0.0;  // rad, servo realization noise std dev

  bool valid() const {
    return hinge_stiffness[0] > 0.0 && hinge_stiffness[1] > 0.0 &&
           hinge_stiffness[2] > 0.0 && link_axial_stiffness > 0.0 &&
           creep_rate >= 0.0 && creep_rate < 1.0 && transition_noise >= 0.0;
  }
  bool operator==(const MaterialProfile&) const = default;
};

/// Creep memory of one finger. Hinge rest angles are stored as offsets from
/// the rigid-kinematic baseline at the commanded servo angles, so a state
/// with zero offsets is at rest in every servo configuration and the stiff
/// limit of the loaded equilibrium recovers the rigid tip. Link rest lengths
/// are absolute (proximal, proximal, distal, distal).
struct ComplianceState {
  std::array<Real, 3> rest_angle_offsets{0.0, 0.0, 0.0};
  std::array<Real, 4> rest_link_lengths{0.0, 0.0, 0.0, 0.0};
  long accumulated_steps = 0;

  static ComplianceState nominal(const FiveBarGeometry& geom) {
    ComplianceState s;
    s.rest_link_lengths = {geom.proximal_length, geom.proximal_length,
                           geom.distal_length, geom.distal_length};
    return s;
  }

  /// Rest link lengths must stay within 20% of nominal; beyond that the
  /// pseudo-rigid-body model no longer represents an intact finger.
  bool within_validity_envelope(const FiveBarGeometry& geom) const {
    const std::array<Real, 4> nominal_lengths{
        geom.proximal_length, geom.proximal_length, geom.distal_length,
        geom.distal_length};
    for (int i = 0; i < 4; ++i) {
      if (std::abs(rest_link_lengths[i] - nominal_lengths[i]) >
          0.2 * nominal_lengths[i])
        return false;
    }
    return true;
  }
  bool operator==(const ComplianceState&) const = default;
};

using ExternalForce = Vec2;  // N, applied at the tip

enum class SolveStatus { ok, non_convergence, invalid_state };

struct EquilibriumResult {
  SolveStatus status = SolveStatus::ok;
  TipPose tip = TipPose::Zero();
  std::array<Real, 3> passive_angles{0.0, 0.0, 0.0};
  std::array<Real, 4> link_lengths{0.0, 0.0, 0.0, 0.0};
  Real energy = 0.0;           // elastic energy, J
  Real objective = 0.0;        // total potential incl. force and extra terms
  Real objective_initial = 0.0;
  Real gradient_norm = 0.0;    // max-abs component of the objective gradient
  int iterations = 0;
  bool ok() const { return status == SolveStatus::ok; }
};

/// Elastic energy of the passive DOF vector (three absolute hinge angles and
/// the two distal link lengths) against the rest state. The two proximal
/// links are rigidly backed by the servo horns; their terms measure the
/// constant nominal length against the rest length.
Real elastic_energy(const FiveBarGeometry& geom,
                    const MaterialProfile& material,
                    const ComplianceState& state, const Vec5& dofs,
                    Real theta1, Real theta2);

/// Additional potential at the tip: returns energy, optionally adds its
/// gradient w.r.t. the tip into *grad.
using TipPotential = std::function<Real(const Vec2& tip, Vec2* grad)>;

struct SolveOptions {
  Real gradient_tolerance = 1e-8;
  int max_iterations = 200;
  const Vec2* warm_start_tip = nullptr;
  TipPotential extra;  // e.g. contact penalties; may be empty
};

/// Quasistatic equilibrium of one finger under a tip force: minimizes
/// elastic energy minus force * tip over the closure manifold (parameterized
/// by the tip position; the hinge angles and distal lengths follow from it).
EquilibriumResult solve_equilibrium(const FiveBarGeometry& geom,
                                    const MaterialProfile& material,
                                    const ComplianceState& state, Real theta1,
                                    Real theta2, const ExternalForce& force,
                                    const SolveOptions& options = {});

/// Gradient of the solver objective w.r.t. the tip position. Exposed for
/// finite-difference verification.
Vec2 equilibrium_gradient(const FiveBarGeometry& geom,
                          const MaterialProfile& material,
                          const ComplianceState& state, Real theta1,
                          Real theta2, const ExternalForce& force,
                          const Vec2& tip, const TipPotential& extra = {});

/// Objective value at a given tip position (energy minus force potential
/// plus any extra term).
Real equilibrium_objective(const FiveBarGeometry& geom,
                           const MaterialProfile& material,
                           const ComplianceState& state, Real theta1,
                           Real theta2, const ExternalForce& force,
                           const Vec2& tip, const TipPotential& extra = {});

/// Relaxes rest angles and lengths toward the current equilibrium:
/// x0 <- (1 - creep_rate) * x0 + creep_rate * x_current.
ComplianceState apply_creep(const ComplianceState& state,
                            const EquilibriumResult& current,
                            const FiveBarGeometry& geom,
                            const MaterialProfile& material, Real theta1,
                            Real theta2);

}  // namespace softbar
