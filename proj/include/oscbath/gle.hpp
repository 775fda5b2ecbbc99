#pragma once

#include <cstddef>

#include "oscbath/potential.hpp"
#include "oscbath/profile.hpp"
#include "oscbath/rng.hpp"
#include "oscbath/spectral.hpp"
#include "oscbath/thermal.hpp"
#include "oscbath/trajectory.hpp"

namespace oscbath {

// Fluctuating force on the grid t0 + k*dt (t0 = the sampling time of the
// bath state it was built from).
struct NoiseRecord {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

// R(t) = sum_n m_n w_n^2 [ (q_n0 - x0) cos(w_n t') +
//                          ((qdot_n0 - v_env(t0))/w_n) sin(w_n t') ]
// with t' = t - t0: the part of the bath force fixed by the initial data.
// Thermal averaging gives <R> = 0 and <R(t)R(s)> = k_B T u(t-s).
NoiseRecord noise_force(const DiscreteBath& bath, const BathState& bath_state,
                        double x0, const VelocityProfile& profile, double dt,
                        std::size_t n_points);

// Memory integrator for
//   M xdd = f(x,t) - int_{t0}^{t} u(t-s) [xdot(s) - v_env(s)] ds + R(t)
// with trapezoidal memory quadrature (O(n^2) total) and the implicit
// diagonal term solved exactly. Kernel and noise grids must match dt and
// cover all n_steps+1 points.
Trajectory integrate_gle(const ParticleSpec& particle, const Kernel& kernel_u,
                         const NoiseRecord& noise, const ParticleInit& init,
                         const VelocityProfile& profile, double dt,
                         std::size_t n_steps);

// Memoryless limit: M xdd = f(x,t) - eta (xdot - v_env(t)) + xi(t) with
// <xi xi'> = 2 eta k_B T delta. BAOAB-style splitting; the velocity
// drag+noise substep uses the exact Ornstein-Uhlenbeck update, so the
// stationary velocity variance carries no dt bias. `temperature` is k_B*T.
Trajectory integrate_langevin_white(const ParticleSpec& particle, double eta,
                                    double temperature, const ParticleInit& init,
                                    const VelocityProfile& profile, double dt,
                                    std::size_t n_steps, CounterRng& stream,
                                    double t0 = 0.0);

} // namespace oscbath
