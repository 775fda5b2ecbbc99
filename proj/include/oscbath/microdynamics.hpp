#pragma once

#include <cstddef>

#include "oscbath/potential.hpp"
#include "oscbath/profile.hpp"
#include "oscbath/spectral.hpp"
#include "oscbath/thermal.hpp"
#include "oscbath/trajectory.hpp"

namespace oscbath {

struct FullIntegrationOptions {
    bool record_energy = false;
};

// Force the bath exerts on the particle for the given coupling mode:
// Invariant: sum m_n w_n^2 (q_n - x); Perturbative: sum m_n w_n^2 q_n.
double particle_bath_force(const DiscreteBath& bath, const std::vector<double>& q,
                           double x);

// Velocity-Verlet integration of the full coupled system
//   M xdd = f(x,t) + [bath force],  qdd_n = -w_n^2 (q_n - x) + vdot_env(t)
// starting from bath_state.sampled_at. Deterministic given inputs; requires
// dt * max(w_n) < 0.5. `final_bath`, when non-null, receives the bath
// coordinates at the final time (diagnostics / restart).
Trajectory integrate_full(const ParticleSpec& particle, const DiscreteBath& bath,
                          const BathState& bath_state, const ParticleInit& init,
                          const VelocityProfile& profile, double dt,
                          std::size_t n_steps,
                          const FullIntegrationOptions& options = {},
                          BathState* final_bath = nullptr);

} // namespace oscbath
