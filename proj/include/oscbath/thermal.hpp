#pragma once

#include <vector>

#include "oscbath/profile.hpp"
#include "oscbath/rng.hpp"
#include "oscbath/spectral.hpp"

namespace oscbath {

// One thermal realization of the bath coordinates at time sampled_at.
struct BathState {
    std::vector<double> positions;
    std::vector<double> velocities;
    double sampled_at = 0.0;
};

struct ParticleInit {
    double x0 = 0.0;
    double v0 = 0.0;
};

// Draw q_n ~ N(x0, kT/(m_n w_n^2)) and qdot_n ~ N(v_env_at_t0, kT/m_n),
// all independent: the canonical bath equilibrated around the particle at x0,
// co-moving with the environment. `temperature` is the thermal energy k_B*T;
// 0 collapses to the exact means.
BathState sample_thermal(const DiscreteBath& bath, double temperature, double x0,
                         double v_env_at_t0, double t0, CounterRng& stream);

// Optional Gaussian spread of the particle initial conditions (widths 0 keep
// the delta-function default).
ParticleInit sample_particle(const ParticleInit& mean, double x_width, double v_width,
                             CounterRng& stream);

} // namespace oscbath
