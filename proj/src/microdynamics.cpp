#include "oscbath/microdynamics.hpp"

#include <cmath>
#include <string>

#include "oscbath/errors.hpp"
#include "oscbath/parallel.hpp"

namespace oscbath {

double particle_bath_force(const DiscreteBath& bath, const std::vector<double>& q,
                           double x) {
    if (bath.coupling_mode == CouplingMode::Invariant) {
        return blocked_sum(bath.size(), [&](std::size_t n) {
            const double w = bath.frequencies[n];
            return bath.masses[n] * w * w * (q[n] - x);
        });
    }
    return blocked_sum(bath.size(), [&](std::size_t n) {
        const double w = bath.frequencies[n];
        return bath.masses[n] * w * w * q[n];
    });
}

namespace {

double total_energy(const ParticleSpec& particle, const DiscreteBath& bath,
                    const std::vector<double>& q, const std::vector<double>& qd,
                    double x, double v, double t) {
    const double particle_part =
        0.5 * particle.mass * v * v + particle.potential.energy(x, t, particle.mass);
    double bath_part;
    if (bath.coupling_mode == CouplingMode::Invariant) {
        bath_part = blocked_sum(bath.size(), [&](std::size_t n) {
            const double w = bath.frequencies[n];
            const double d = q[n] - x;
            return 0.5 * bath.masses[n] * (qd[n] * qd[n] + w * w * d * d);
        });
    } else {
        // bilinear coupling contributes -x * sum m w^2 q with no counter-term
        bath_part = blocked_sum(bath.size(), [&](std::size_t n) {
            const double w = bath.frequencies[n];
            return 0.5 * bath.masses[n] * (qd[n] * qd[n] + w * w * q[n] * q[n]) -
                   x * bath.masses[n] * w * w * q[n];
        });
    }
    return particle_part + bath_part;
}

} // namespace

Trajectory integrate_full(const ParticleSpec& particle, const DiscreteBath& bath,
                          const BathState& bath_state, const ParticleInit& init,
                          const VelocityProfile& profile, double dt,
                          std::size_t n_steps, const FullIntegrationOptions& options,
                          BathState* final_bath) {
    if (!(dt > 0.0)) throw config_error("full integration: dt must be > 0");
    if (dt * bath.max_frequency() >= 0.5)
        throw config_error("full integration: dt * max frequency must stay below 0.5");
    if (bath_state.positions.size() != bath.size() ||
        bath_state.velocities.size() != bath.size())
        throw config_error("full integration: bath state size mismatch");
    if (!std::isfinite(init.x0) || !std::isfinite(init.v0))
        throw config_error("full integration: non-finite initial data");

    const double t0 = bath_state.sampled_at;
    const double M = particle.mass;
    const std::size_t N = bath.size();
    const long long nll = static_cast<long long>(N);

    double x = init.x0;
    double v = init.v0;
    std::vector<double> q = bath_state.positions;
    std::vector<double> qd = bath_state.velocities;
    std::vector<double> aq(N);

    auto oscillator_accels = [&](double xc, double vdot_env) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (N > 256)
#endif
        for (long long n = 0; n < nll; ++n) {
            const double w = bath.frequencies[static_cast<std::size_t>(n)];
            aq[static_cast<std::size_t>(n)] =
                -w * w * (q[static_cast<std::size_t>(n)] - xc) + vdot_env;
        }
    };

    Trajectory traj;
    traj.t0 = t0;
    traj.dt = dt;
    traj.x.reserve(n_steps + 1);
    traj.v.reserve(n_steps + 1);
    if (options.record_energy) traj.energy.reserve(n_steps + 1);

    auto record = [&](double t) {
        traj.x.push_back(x);
        traj.v.push_back(v);
        if (options.record_energy)
            traj.energy.push_back(total_energy(particle, bath, q, qd, x, v, t));
    };

    double ax = (particle.potential.force(x, t0, M) + particle_bath_force(bath, q, x)) / M;
    oscillator_accels(x, velocity_at(profile, t0).vdot);
    record(t0);

    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t1 = t0 + static_cast<double>(k + 1) * dt;

        const double v_half = v + 0.5 * dt * ax;
        x += dt * v_half;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (N > 256)
#endif
        for (long long n = 0; n < nll; ++n) {
            const std::size_t i = static_cast<std::size_t>(n);
            const double qd_half = qd[i] + 0.5 * dt * aq[i];
            q[i] += dt * qd_half;
            qd[i] = qd_half; // second half-kick applied below
        }

        ax = (particle.potential.force(x, t1, M) + particle_bath_force(bath, q, x)) / M;
        const double vdot1 = velocity_at(profile, t1).vdot;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (N > 256)
#endif
        for (long long n = 0; n < nll; ++n) {
            const std::size_t i = static_cast<std::size_t>(n);
            const double w = bath.frequencies[i];
            const double a_new = -w * w * (q[i] - x) + vdot1;
            qd[i] += 0.5 * dt * a_new;
            aq[i] = a_new;
        }
        v = v_half + 0.5 * dt * ax;

        if (!std::isfinite(x) || !std::isfinite(v) || !std::isfinite(ax))
            throw divergence_error(
                "full integration: non-finite state at step " + std::to_string(k + 1),
                k + 1);
        record(t1);
    }

    if (final_bath) {
        final_bath->positions = std::move(q);
        final_bath->velocities = std::move(qd);
        final_bath->sampled_at = t0 + static_cast<double>(n_steps) * dt;
    }
    return traj;
}

} // namespace oscbath
