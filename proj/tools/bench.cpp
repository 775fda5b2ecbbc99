// Timing comparison: serial reference loops vs the OpenMP kernels, plus the
// max absolute discrepancy between the two as a sanity column.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "oscbath/ensemble.hpp"
#include "oscbath/parallel.hpp"
#include "oscbath/reference.hpp"

using namespace oscbath;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

double time_best_of(const std::function<void()>& fn, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double start = now_seconds();
        fn();
        best = std::min(best, now_seconds() - start);
    }
    return best;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

void report(const char* name, double serial, double parallel, double diff) {
    std::printf("%-18s %10.4f ms %10.4f ms   x%5.2f   max|d| %.3e\n", name,
                serial * 1e3, parallel * 1e3, serial / parallel, diff);
}

} // namespace

int main() {
    std::printf("threads: %d\n", max_threads());
    std::printf("%-18s %13s %13s %8s\n", "kernel", "serial", "parallel", "speedup");

    const DiscreteBath bath = discretize(white_noise_density(1.0, 1.0, 50.0), 4096);
    const double dt = 1e-3;
    const std::size_t n_points = 8192;

    Kernel u_ser, u_par;
    report(
        "kernel_u",
        time_best_of([&] { u_ser = ref::kernel_u(bath, uniform_grid(dt, n_points)); }),
        time_best_of([&] { u_par = kernel_u(bath, dt, n_points); }),
        max_abs_diff(u_ser.values, u_par.values));

    Kernel a_ser, a_par;
    report("kernel_alpha",
           time_best_of([&] {
               a_ser = ref::kernel_alpha(bath, uniform_grid(dt, n_points), 1.0, 1.0);
           }),
           time_best_of([&] { a_par = kernel_alpha(bath, dt, n_points, 1.0, 1.0); }),
           max_abs_diff(a_ser.values, a_par.values));

    CounterRng stream(2026);
    const BathState state = sample_thermal(bath, 1.0, 0.0, 0.0, 0.0, stream);
    const VelocityProfile profile = constant_profile(0.0);
    NoiseRecord r_ser, r_par;
    report(
        "noise_force",
        time_best_of([&] { r_ser = ref::noise_force(bath, state, 0.0, profile, dt, n_points); }),
        time_best_of([&] { r_par = noise_force(bath, state, 0.0, profile, dt, n_points); }),
        max_abs_diff(r_ser.values, r_par.values));

    PathPair path;
    path.dt = dt;
    path.X.resize(n_points / 2);
    path.xi.resize(n_points / 2);
    for (std::size_t k = 0; k < path.X.size(); ++k) {
        const double t = static_cast<double>(k) * dt;
        path.X[k] = std::sin(t);
        path.xi[k] = 0.1 * std::cos(3.0 * t);
    }
    InfluencePhase p_ser, p_par;
    report("influence_phase",
           time_best_of([&] { p_ser = ref::influence_phase(u_par, a_par, path, profile); }),
           time_best_of([&] { p_par = influence_phase(u_par, a_par, path, profile); }),
           std::max(std::abs(p_ser.real_part - p_par.real_part),
                    std::abs(p_ser.imag_part - p_par.imag_part)));

    ParticleSpec particle;
    particle.potential = harmonic_potential(1.0);
    ParticleInit init;
    init.x0 = 1.0;
    Trajectory g_ser, g_par;
    report(
        "integrate_gle",
        time_best_of([&] {
            g_ser = ref::integrate_gle(particle, u_par, r_par, init, profile, dt,
                                       n_points - 1);
        }),
        time_best_of([&] {
            g_par = integrate_gle(particle, u_par, r_par, init, profile, dt, n_points - 1);
        }),
        max_abs_diff(g_ser.x, g_par.x));

    return 0;
}
