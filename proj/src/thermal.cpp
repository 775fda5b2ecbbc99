#include "oscbath/thermal.hpp"

#include <cmath>

#include "oscbath/errors.hpp"

namespace oscbath {

BathState sample_thermal(const DiscreteBath& bath, double temperature, double x0,
                         double v_env_at_t0, double t0, CounterRng& stream) {
    if (temperature < 0.0) throw config_error("thermal sampling: negative temperature");
    if (!std::isfinite(x0) || !std::isfinite(v_env_at_t0) || !std::isfinite(t0))
        throw config_error("thermal sampling: non-finite inputs");

    BathState state;
    state.sampled_at = t0;
    const std::size_t n = bath.size();
    state.positions.resize(n);
    state.velocities.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double m = bath.masses[i];
        const double w = bath.frequencies[i];
        // thermal widths of the oscillator coordinate and velocity
        const double sq = temperature > 0.0 ? std::sqrt(temperature / (m * w * w)) : 0.0;
        const double sv = temperature > 0.0 ? std::sqrt(temperature / m) : 0.0;
        state.positions[i] = x0 + sq * stream.normal();
        state.velocities[i] = v_env_at_t0 + sv * stream.normal();
    }
    return state;
}

ParticleInit sample_particle(const ParticleInit& mean, double x_width, double v_width,
                             CounterRng& stream) {
    if (x_width < 0.0 || v_width < 0.0)
        throw config_error("particle sampling: negative width");
    ParticleInit init = mean;
    if (x_width > 0.0) init.x0 += x_width * stream.normal();
    if (v_width > 0.0) init.v0 += v_width * stream.normal();
    return init;
}

} // namespace oscbath
