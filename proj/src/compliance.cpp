#include "softbar/compliance.hpp"

#include <algorithm>
#include <cmath>

namespace softbar {

namespace {

struct Frame {
  Vec2 b1, b2, k1, k2;
  std::array<Real, 3> baseline;  // rigid interior angles at the servo angles
};

Frame make_frame(const FiveBarGeometry& geom, Real theta1, Real theta2) {
  Frame f;
  const auto [b1, b2] = base_points(geom);
  f.b1 = b1;
  f.b2 = b2;
  const FkResult fk = forward_kinematics_clamped(geom, theta1, theta2);
  f.k1 = fk.knee1;
  f.k2 = fk.knee2;
  f.baseline = interior_hinge_angles(geom, fk.knee1, fk.tip, fk.knee2);
  return f;
}

std::array<Real, 3> rest_angles(const Frame& f, const ComplianceState& state) {
  return {f.baseline[0] + state.rest_angle_offsets[0],
          f.baseline[1] + state.rest_angle_offsets[1],
          f.baseline[2] + state.rest_angle_offsets[2]};
}

Real cwise_max_abs(const Vec2& v) { return v.cwiseAbs().maxCoeff(); }

// d(turn(u, w))/du and /dw with turn = atan2(cross(u, w), dot(u, w)).
Vec2 dturn_du(const Vec2& u, const Vec2& w) {
  const Real c = cross2(u, w), m = u.dot(w);
  return (-m * perp(w) - c * w) / (c * c + m * m);
}
Vec2 dturn_dw(const Vec2& u, const Vec2& w) {
  const Real c = cross2(u, w), m = u.dot(w);
  return (m * perp(u) - c * u) / (c * c + m * m);
}

struct Deflections {
  std::array<Real, 3> angles;
  Real l1, l2;
};

Deflections deflections_at(const FiveBarGeometry& geom, const Frame& f,
                           const Vec2& tip) {
  Deflections d;
  d.angles = interior_hinge_angles(geom, f.k1, tip, f.k2);
  d.l1 = std::max((tip - f.k1).norm(), Real(1e-12));
  d.l2 = std::max((tip - f.k2).norm(), Real(1e-12));
  return d;
}

Real elastic_energy_at(const FiveBarGeometry& geom,
                       const MaterialProfile& mat,
                       const ComplianceState& state, const Frame& f,
                       const Deflections& d) {
  const auto rest = rest_angles(f, state);
  const Real kappa = mat.link_axial_stiffness;
  Real e = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Real da = d.angles[i] - rest[i];
    e += 0.5 * mat.hinge_stiffness[i] * da * da;
  }
  const Real dp1 = geom.proximal_length - state.rest_link_lengths[0];
  const Real dp2 = geom.proximal_length - state.rest_link_lengths[1];
  const Real dd1 = d.l1 - state.rest_link_lengths[2];
  const Real dd2 = d.l2 - state.rest_link_lengths[3];
  e += 0.5 * kappa * (dp1 * dp1 + dp2 * dp2 + dd1 * dd1 + dd2 * dd2);
  return e;
}

Vec2 elastic_gradient_at(const FiveBarGeometry& geom,
                         const MaterialProfile& mat,
                         const ComplianceState& state, const Frame& f,
                         const Vec2& tip) {
  const Real s = geom.branch == Branch::tip_up ? 1.0 : -1.0;
  const auto rest = rest_angles(f, state);
  const Deflections d = deflections_at(geom, f, tip);

  // Hinge angle gradients w.r.t. the tip.
  const Vec2 u1 = f.k1 - f.b1, w1 = tip - f.k1;
  const Vec2 u2 = tip - f.k1, w2 = f.k2 - tip;
  const Vec2 u3 = f.k2 - tip, w3 = f.b2 - f.k2;
  const Vec2 dphi1 = s * dturn_dw(u1, w1);
  const Vec2 dphi2 = s * (dturn_du(u2, w2) - dturn_dw(u2, w2));
  const Vec2 dphi3 = s * (-dturn_du(u3, w3));

  Vec2 g = Vec2::Zero();
  g += mat.hinge_stiffness[0] * (d.angles[0] - rest[0]) * dphi1;
  g += mat.hinge_stiffness[1] * (d.angles[1] - rest[1]) * dphi2;
  g += mat.hinge_stiffness[2] * (d.angles[2] - rest[2]) * dphi3;

  const Real kappa = mat.link_axial_stiffness;
  g += kappa * (d.l1 - state.rest_link_lengths[2]) * (tip - f.k1) / d.l1;
  g += kappa * (d.l2 - state.rest_link_lengths[3]) * (tip - f.k2) / d.l2;
  return g;
}

Real objective_at(const FiveBarGeometry& geom, const MaterialProfile& mat,
                  const ComplianceState& state, const Frame& f,
                  const ExternalForce& force, const Vec2& tip,
                  const TipPotential& extra) {
  const Deflections d = deflections_at(geom, f, tip);
  Real v = elastic_energy_at(geom, mat, state, f, d) - force.dot(tip);
  if (extra) v += extra(tip, nullptr);
  return v;
}

Vec2 gradient_at(const FiveBarGeometry& geom, const MaterialProfile& mat,
                 const ComplianceState& state, const Frame& f,
                 const ExternalForce& force, const Vec2& tip,
                 const TipPotential& extra) {
  Vec2 g = elastic_gradient_at(geom, mat, state, f, tip) - force;
  if (extra) {
    Vec2 ge = Vec2::Zero();
    extra(tip, &ge);
    g += ge;
  }
  return g;
}

}  // namespace

Real elastic_energy(const FiveBarGeometry& geom,
                    const MaterialProfile& material,
                    const ComplianceState& state, const Vec5& dofs,
                    Real theta1, Real theta2) {
  const Frame f = make_frame(geom, theta1, theta2);
  Deflections d;
  d.angles = {dofs[0], dofs[1], dofs[2]};
  d.l1 = dofs[3];
  d.l2 = dofs[4];
  return elastic_energy_at(geom, material, state, f, d);
}

Real equilibrium_objective(const FiveBarGeometry& geom,
                           const MaterialProfile& material,
                           const ComplianceState& state, Real theta1,
                           Real theta2, const ExternalForce& force,
                           const Vec2& tip, const TipPotential& extra) {
  const Frame f = make_frame(geom, theta1, theta2);
  return objective_at(geom, material, state, f, force, tip, extra);
}

Vec2 equilibrium_gradient(const FiveBarGeometry& geom,
                          const MaterialProfile& material,
                          const ComplianceState& state, Real theta1,
                          Real theta2, const ExternalForce& force,
                          const Vec2& tip, const TipPotential& extra) {
  const Frame f = make_frame(geom, theta1, theta2);
  return gradient_at(geom, material, state, f, force, tip, extra);
}

EquilibriumResult solve_equilibrium(const FiveBarGeometry& geom,
                                    const MaterialProfile& material,
                                    const ComplianceState& state, Real theta1,
                                    Real theta2, const ExternalForce& force,
                                    const SolveOptions& options) {
  EquilibriumResult res;
  if (!state.within_validity_envelope(geom)) {
    res.status = SolveStatus::invalid_state;
    return res;
  }
  const Frame f = make_frame(geom, theta1, theta2);

  Vec2 tip;
  if (options.warm_start_tip) {
    tip = *options.warm_start_tip;
  } else {
    tip = forward_kinematics_clamped(geom, theta1, theta2).tip;
  }

  auto obj = [&](const Vec2& t) {
    return objective_at(geom, material, state, f, force, t, options.extra);
  };
  auto grad = [&](const Vec2& t) {
    return gradient_at(geom, material, state, f, force, t, options.extra);
  };

  Real value = obj(tip);
  res.objective_initial = value;

  const Real tol = options.gradient_tolerance;
  Real lambda = 0.0;
  Vec2 g = grad(tip);
  Real gnorm = cwise_max_abs(g);
  int it = 0;
  for (; it < options.max_iterations && gnorm >= tol; ++it) {
    // Central-difference Hessian of the analytic gradient.
    const Real h = 1e-7;
    Mat2 hess;
    for (int j = 0; j < 2; ++j) {
      Vec2 tp = tip, tm = tip;
      tp[j] += h;
      tm[j] -= h;
      hess.col(j) = (grad(tp) - grad(tm)) / (2.0 * h);
    }
    hess = 0.5 * (hess + hess.transpose()).eval();
    const Real hscale = std::max(hess.cwiseAbs().maxCoeff(), Real(1e-6));

    bool accepted = false;
    for (int tries = 0; tries < 30 && !accepted; ++tries) {
      Mat2 damped = hess + lambda * Mat2::Identity();
      if (damped.trace() <= 0.0 || damped.determinant() <= 0.0) {
        lambda = std::max(2.0 * lambda, 1e-6 * hscale);
        continue;
      }
      Vec2 step = damped.ldlt().solve(-g);
      const Real max_step = 0.05;  // m, keeps iterates on the manifold chart
      if (step.norm() > max_step) step *= max_step / step.norm();
      const Vec2 cand = tip + step;
      const Real cand_value = obj(cand);
      const Vec2 cand_g = grad(cand);
      const Real cand_gnorm = cwise_max_abs(cand_g);
      if (cand_value <= value || cand_gnorm < 0.5 * gnorm) {
        tip = cand;
        value = std::min(cand_value, value);
        g = cand_g;
        gnorm = cand_gnorm;
        lambda /= 3.0;
        if (lambda < 1e-12 * hscale) lambda = 0.0;
        accepted = true;
      } else {
        lambda = std::max(4.0 * lambda, 1e-6 * hscale);
      }
    }
    if (!accepted) break;
  }

  const Deflections d = deflections_at(geom, f, tip);
  res.tip = tip;
  res.passive_angles = d.angles;
  res.link_lengths = {geom.proximal_length, geom.proximal_length, d.l1, d.l2};
  res.energy = elastic_energy_at(geom, material, state, f, d);
  res.objective = obj(tip);
  res.gradient_norm = gnorm;
  res.iterations = it;
  res.status = gnorm < tol ? SolveStatus::ok : SolveStatus::non_convergence;
  return res;
}

ComplianceState apply_creep(const ComplianceState& state,
                            const EquilibriumResult& current,
                            const FiveBarGeometry& geom,
                            const MaterialProfile& material, Real theta1,
                            Real theta2) {
  ComplianceState next = state;
  const Real lam = material.creep_rate;
  if (lam > 0.0) {
    const Frame f = make_frame(geom, theta1, theta2);
    for (int i = 0; i < 3; ++i) {
      const Real current_offset = current.passive_angles[i] - f.baseline[i];
      next.rest_angle_offsets[i] =
          (1.0 - lam) * state.rest_angle_offsets[i] + lam * current_offset;
    }
    for (int i = 0; i < 4; ++i) {
      next.rest_link_lengths[i] = (1.0 - lam) * state.rest_link_lengths[i] +
                                  lam * current.link_lengths[i];
    }
  }
  next.accumulated_steps = state.accumulated_steps + 1;
  return next;
}

}  // namespace softbar
