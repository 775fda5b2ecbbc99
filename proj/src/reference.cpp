#include "oscbath/reference.hpp"

#include <cmath>
#include <string>

#include "oscbath/errors.hpp"

namespace oscbath::ref {

Kernel kernel_u(const DiscreteBath& bath, const std::vector<double>& tau_grid) {
    Kernel kernel;
    kernel.tau_grid = tau_grid;
    kernel.values.assign(tau_grid.size(), 0.0);
    for (std::size_t k = 0; k < tau_grid.size(); ++k) {
        double s = 0.0;
        for (std::size_t n = 0; n < bath.size(); ++n) {
            const double w = bath.frequencies[n];
            s += bath.masses[n] * w * w * std::cos(w * tau_grid[k]);
        }
        kernel.values[k] = s;
    }
    return kernel;
}

Kernel kernel_alpha(const DiscreteBath& bath, const std::vector<double>& tau_grid,
                    double temperature, double hbar) {
    Kernel kernel;
    kernel.tau_grid = tau_grid;
    kernel.values.assign(tau_grid.size(), 0.0);
    for (std::size_t k = 0; k < tau_grid.size(); ++k) {
        double s = 0.0;
        for (std::size_t n = 0; n < bath.size(); ++n) {
            const double w = bath.frequencies[n];
            s += 0.5 * bath.masses[n] * hbar * w * w * w /
                 std::tanh(0.5 * hbar * w / temperature) * std::cos(w * tau_grid[k]);
        }
        kernel.values[k] = s;
    }
    return kernel;
}

NoiseRecord noise_force(const DiscreteBath& bath, const BathState& bath_state,
                        double x0, const VelocityProfile& profile, double dt,
                        std::size_t n_points) {
    const double t0 = bath_state.sampled_at;
    const double v_env0 = velocity_at(profile, t0).v;
    NoiseRecord record;
    record.t0 = t0;
    record.dt = dt;
    record.values.assign(n_points, 0.0);
    for (std::size_t k = 0; k < n_points; ++k) {
        const double tp = static_cast<double>(k) * dt;
        double s = 0.0;
        for (std::size_t n = 0; n < bath.size(); ++n) {
            const double w = bath.frequencies[n];
            const double mw2 = bath.masses[n] * w * w;
            s += mw2 * ((bath_state.positions[n] - x0) * std::cos(w * tp) +
                        (bath_state.velocities[n] - v_env0) / w * std::sin(w * tp));
        }
        record.values[k] = s;
    }
    return record;
}

InfluencePhase influence_phase(const Kernel& kernel_u, const Kernel& kernel_alpha,
                               const PathPair& path, const VelocityProfile& profile) {
    const std::size_t n = path.size();
    const double dt = path.dt;
    const auto& u = kernel_u.values;
    const auto& a = kernel_alpha.values;
    const auto& xi = path.xi;

    std::vector<double> Xdot(n), w(n), c(n, 1.0);
    c[0] = c[n - 1] = 0.5;
    if (n == 2) {
        Xdot[0] = Xdot[1] = (path.X[1] - path.X[0]) / dt;
    } else {
        Xdot[0] = (-3.0 * path.X[0] + 4.0 * path.X[1] - path.X[2]) / (2.0 * dt);
        Xdot[n - 1] =
            (3.0 * path.X[n - 1] - 4.0 * path.X[n - 2] + path.X[n - 3]) / (2.0 * dt);
        for (std::size_t k = 1; k + 1 < n; ++k)
            Xdot[k] = (path.X[k + 1] - path.X[k - 1]) / (2.0 * dt);
    }
    for (std::size_t k = 0; k < n; ++k)
        w[k] = Xdot[k] - velocity_at(profile, path.t0 + static_cast<double>(k) * dt).v;

    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k >= 1) {
            double inner = 0.5 * u[k] * w[0] + 0.5 * u[0] * w[k];
            for (std::size_t j = 1; j < k; ++j) inner += u[k - j] * w[j];
            re += c[k] * xi[k] * inner;
        }
        double inner_a = 0.5 * c[k] * a[0] * xi[k];
        for (std::size_t j = 0; j < k; ++j) inner_a += c[j] * a[k - j] * xi[j];
        im += c[k] * xi[k] * inner_a;
    }
    return InfluencePhase{dt * dt * re, dt * dt * im};
}

Trajectory integrate_gle(const ParticleSpec& particle, const Kernel& kernel_u,
                         const NoiseRecord& noise, const ParticleInit& init,
                         const VelocityProfile& profile, double dt,
                         std::size_t n_steps) {
    const double t0 = noise.t0;
    const double M = particle.mass;
    const auto& u = kernel_u.values;
    const auto& R = noise.values;
    const double u0 = u[0];

    Trajectory traj;
    traj.t0 = t0;
    traj.dt = dt;

    std::vector<double> w(n_steps + 1), v_env(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k)
        v_env[k] = velocity_at(profile, t0 + static_cast<double>(k) * dt).v;

    double x = init.x0;
    double v = init.v0;
    w[0] = v - v_env[0];
    traj.x.push_back(x);
    traj.v.push_back(v);

    auto mem_off = [&](std::size_t k) {
        if (k == 0) return 0.0;
        double s = 0.5 * u[k] * w[0];
        for (std::size_t j = 1; j < k; ++j) s += u[k - j] * w[j];
        return dt * s;
    };

    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = t0 + static_cast<double>(k) * dt;
        const double a =
            (particle.potential.force(x, t, M) + R[k] - mem_off(k) - 0.5 * dt * u0 * w[k]) / M;
        const double v_half = v + 0.5 * dt * a;
        x += dt * v_half;
        const double rhs = v_half + 0.5 * dt / M *
                                        (particle.potential.force(x, t + dt, M) + R[k + 1] -
                                         mem_off(k + 1) + 0.5 * dt * u0 * v_env[k + 1]);
        v = rhs / (1.0 + 0.25 * dt * dt * u0 / M);
        w[k + 1] = v - v_env[k + 1];
        traj.x.push_back(x);
        traj.v.push_back(v);
    }
    return traj;
}

Trajectory integrate_full(const ParticleSpec& particle, const DiscreteBath& bath,
                          const BathState& bath_state, const ParticleInit& init,
                          const VelocityProfile& profile, double dt,
                          std::size_t n_steps) {
    const double t0 = bath_state.sampled_at;
    const double M = particle.mass;
    const std::size_t N = bath.size();
    const bool invariant = bath.coupling_mode == CouplingMode::Invariant;

    double x = init.x0;
    double v = init.v0;
    std::vector<double> q = bath_state.positions;
    std::vector<double> qd = bath_state.velocities;
    std::vector<double> aq(N);

    auto bath_force = [&]() {
        double s = 0.0;
        for (std::size_t n = 0; n < N; ++n) {
            const double w = bath.frequencies[n];
            s += bath.masses[n] * w * w * (invariant ? q[n] - x : q[n]);
        }
        return s;
    };

    Trajectory traj;
    traj.t0 = t0;
    traj.dt = dt;
    double ax = (particle.potential.force(x, t0, M) + bath_force()) / M;
    double vdot = velocity_at(profile, t0).vdot;
    for (std::size_t n = 0; n < N; ++n) {
        const double w = bath.frequencies[n];
        aq[n] = -w * w * (q[n] - x) + vdot;
    }
    traj.x.push_back(x);
    traj.v.push_back(v);

    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t1 = t0 + static_cast<double>(k + 1) * dt;
        const double v_half = v + 0.5 * dt * ax;
        x += dt * v_half;
        for (std::size_t n = 0; n < N; ++n) {
            const double qd_half = qd[n] + 0.5 * dt * aq[n];
            q[n] += dt * qd_half;
            qd[n] = qd_half;
        }
        ax = (particle.potential.force(x, t1, M) + bath_force()) / M;
        vdot = velocity_at(profile, t1).vdot;
        for (std::size_t n = 0; n < N; ++n) {
            const double w = bath.frequencies[n];
            const double a_new = -w * w * (q[n] - x) + vdot;
            qd[n] += 0.5 * dt * a_new;
            aq[n] = a_new;
        }
        v = v_half + 0.5 * dt * ax;
        if (!std::isfinite(x) || !std::isfinite(v))
            throw divergence_error(
                "reference full integration: non-finite state at step " + std::to_string(k + 1),
                k + 1);
        traj.x.push_back(x);
        traj.v.push_back(v);
    }
    return traj;
}

} // namespace oscbath::ref
