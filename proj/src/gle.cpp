#include "oscbath/gle.hpp"

#include <cmath>
#include <string>

#include "oscbath/errors.hpp"
#include "oscbath/parallel.hpp"

namespace oscbath {

NoiseRecord noise_force(const DiscreteBath& bath, const BathState& bath_state,
                        double x0, const VelocityProfile& profile, double dt,
                        std::size_t n_points) {
    if (!(dt > 0.0)) throw config_error("noise force: dt must be > 0");
    if (n_points == 0) throw config_error("noise force: empty grid");
    if (bath_state.positions.size() != bath.size() ||
        bath_state.velocities.size() != bath.size())
        throw config_error("noise force: bath state size mismatch");

    const double t0 = bath_state.sampled_at;
    const double v_env0 = velocity_at(profile, t0).v;
    const std::size_t N = bath.size();

    // per-mode amplitudes fixed by the initial data
    std::vector<double> ac(N), as(N);
    for (std::size_t n = 0; n < N; ++n) {
        const double w = bath.frequencies[n];
        const double mw2 = bath.masses[n] * w * w;
        ac[n] = mw2 * (bath_state.positions[n] - x0);
        as[n] = mw2 * (bath_state.velocities[n] - v_env0) / w;
    }

    NoiseRecord record;
    record.t0 = t0;
    record.dt = dt;
    record.values.resize(n_points);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long k = 0; k < static_cast<long long>(n_points); ++k) {
        const double tp = static_cast<double>(k) * dt;
        double s = 0.0;
        for (std::size_t n = 0; n < N; ++n) {
            const double w = bath.frequencies[n];
            s += ac[n] * std::cos(w * tp) + as[n] * std::sin(w * tp);
        }
        record.values[static_cast<std::size_t>(k)] = s;
    }
    return record;
}

Trajectory integrate_gle(const ParticleSpec& particle, const Kernel& kernel_u,
                         const NoiseRecord& noise, const ParticleInit& init,
                         const VelocityProfile& profile, double dt,
                         std::size_t n_steps) {
    if (!(dt > 0.0)) throw config_error("memory integrator: dt must be > 0");
    if (kernel_u.size() < n_steps + 1 || noise.size() < n_steps + 1)
        throw config_error("memory integrator: kernel/noise grids too short");
    if (kernel_u.size() >= 2 &&
        std::abs(kernel_u.step() - dt) > 1e-9 * dt)
        throw config_error("memory integrator: kernel grid step does not match dt");
    if (std::abs(noise.dt - dt) > 1e-9 * dt)
        throw config_error("memory integrator: noise grid step does not match dt");

    const double t0 = noise.t0;
    const double M = particle.mass;
    const double* u = kernel_u.values.data();
    const double* R = noise.values.data();
    const double u0 = u[0];

    Trajectory traj;
    traj.t0 = t0;
    traj.dt = dt;
    traj.x.reserve(n_steps + 1);
    traj.v.reserve(n_steps + 1);

    // integrand history w_j = xdot(t_j) - v_env(t_j)
    std::vector<double> w(n_steps + 1);
    std::vector<double> v_env(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k)
        v_env[k] = velocity_at(profile, t0 + static_cast<double>(k) * dt).v;

    double x = init.x0;
    double v = init.v0;
    w[0] = v - v_env[0];
    traj.x.push_back(x);
    traj.v.push_back(v);

    // trapezoidal memory integral at node k, diagonal term excluded
    auto memory_off_diagonal = [&](std::size_t k) {
        if (k == 0) return 0.0;
        return dt * blocked_sum(k, [&](std::size_t j) {
                   const double weight = j == 0 ? 0.5 : 1.0;
                   return weight * u[k - j] * w[j];
               });
    };

    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = t0 + static_cast<double>(k) * dt;
        const double t1 = t + dt;

        const double mem_k = memory_off_diagonal(k) + 0.5 * dt * u0 * w[k];
        const double a = (particle.potential.force(x, t, M) + R[k] - mem_k) / M;
        const double v_half = v + 0.5 * dt * a;
        x += dt * v_half;

        // implicit diagonal contribution solved exactly:
        // M v' = M v_half + dt/2 [ f + R - I_off - dt/2 u0 (v' - v_env) ]
        const double I_off = memory_off_diagonal(k + 1);
        const double f1 = particle.potential.force(x, t1, M);
        const double rhs =
            v_half + 0.5 * dt / M * (f1 + R[k + 1] - I_off + 0.5 * dt * u0 * v_env[k + 1]);
        v = rhs / (1.0 + 0.25 * dt * dt * u0 / M);
        w[k + 1] = v - v_env[k + 1];

        if (!std::isfinite(x) || !std::isfinite(v))
            throw divergence_error(
                "memory integrator: non-finite state at step " + std::to_string(k + 1),
                k + 1);
        traj.x.push_back(x);
        traj.v.push_back(v);
    }
    return traj;
}

Trajectory integrate_langevin_white(const ParticleSpec& particle, double eta,
                                    double temperature, const ParticleInit& init,
                                    const VelocityProfile& profile, double dt,
                                    std::size_t n_steps, CounterRng& stream,
                                    double t0) {
    if (!(dt > 0.0)) throw config_error("white-noise integrator: dt must be > 0");
    if (eta < 0.0) throw config_error("white-noise integrator: eta must be >= 0");
    if (temperature < 0.0)
        throw config_error("white-noise integrator: negative temperature");

    const double M = particle.mass;
    const double gamma = eta / M;
    const double decay = std::exp(-gamma * dt);
    // fluctuation amplitude of the exact velocity update over one step
    const double kick =
        eta > 0.0 ? std::sqrt(temperature / M * (1.0 - decay * decay)) : 0.0;

    Trajectory traj;
    traj.t0 = t0;
    traj.dt = dt;
    traj.x.reserve(n_steps + 1);
    traj.v.reserve(n_steps + 1);

    double x = init.x0;
    double v = init.v0;
    traj.x.push_back(x);
    traj.v.push_back(v);

    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = t0 + static_cast<double>(k) * dt;
        const double t1 = t + dt;

        v += 0.5 * dt * particle.potential.force(x, t, M) / M;
        x += 0.5 * dt * v;
        if (eta > 0.0) {
            // drag towards the local environment velocity + thermal kick,
            // exact over the step for the velocity process
            const double v_env = velocity_at(profile, t + 0.5 * dt).v;
            v = v_env + (v - v_env) * decay + kick * stream.normal();
        }
        x += 0.5 * dt * v;
        v += 0.5 * dt * particle.potential.force(x, t1, M) / M;

        if (!std::isfinite(x) || !std::isfinite(v))
            throw divergence_error(
                "white-noise integrator: non-finite state at step " + std::to_string(k + 1),
                k + 1);
        traj.x.push_back(x);
        traj.v.push_back(v);
    }
    return traj;
}

} // namespace oscbath
