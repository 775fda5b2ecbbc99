#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oscbath/errors.hpp"
#include "oscbath/microdynamics.hpp"
#include "oscbath/reference.hpp"

using namespace oscbath;

namespace {

const double kPi = 3.14159265358979323846;

BathState state_at(const DiscreteBath& bath, double q, double qd, double t0 = 0.0) {
    BathState st;
    st.positions.assign(bath.size(), q);
    st.velocities.assign(bath.size(), qd);
    st.sampled_at = t0;
    return st;
}

} // namespace

TEST_CASE("free drift with an empty bath") {
    ParticleSpec particle;
    ParticleInit init;
    init.v0 = 1.0;
    const DiscreteBath empty = make_bath({}, {});
    const Trajectory traj = integrate_full(particle, empty, state_at(empty, 0.0, 0.0),
                                           init, constant_profile(0.0), 1e-3, 1000);
    CHECK(std::abs(traj.x.back() - 1.0) < 1e-9);
    CHECK(traj.v.back() == 1.0);
}

TEST_CASE("pinned particle leaves an isolated oscillator") {
    ParticleSpec particle;
    particle.mass = 1e9;
    const DiscreteBath bath = make_bath({2.0}, {1.0});
    BathState st = state_at(bath, 1.0, 0.0);
    ParticleInit init;
    const double dt = kPi / 3142.0;
    BathState final_bath;
    integrate_full(particle, bath, st, init, constant_profile(0.0), dt, 3142, {},
                   &final_bath);
    // q(t) = cos(2t): one full period over the horizon pi
    CHECK(std::abs(final_bath.positions[0] - 1.0) < 1e-6);
    CHECK(std::abs(final_bath.velocities[0]) < 1e-5);
    CHECK(final_bath.sampled_at == doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("moving environment drives the oscillator through vdot") {
    // pinned particle at 0, ramp acceleration a: q(t) = (a/w^2)(1 - cos w t)
    ParticleSpec particle;
    particle.mass = 1e9;
    const DiscreteBath bath = make_bath({1.0}, {1.0});
    BathState st = state_at(bath, 0.0, 0.0);
    ParticleInit init;
    const double dt = kPi / 3142.0;
    BathState final_bath;
    integrate_full(particle, bath, st, init, ramp_profile(0.0, 2.0), dt, 3142, {},
                   &final_bath);
    CHECK(final_bath.positions[0] == doctest::Approx(4.0).epsilon(1e-5));
}

TEST_CASE("perturbative coupling exerts the spurious mean force") {
    const DiscreteBath inv = discretize(white_noise_density(1.0, 1.0, 10.0), 100,
                                        CouplingMode::Invariant);
    const DiscreteBath pert = discretize(white_noise_density(1.0, 1.0, 10.0), 100,
                                         CouplingMode::Perturbative);
    const double x0 = 1.0;
    // kT -> 0 bath: every q_n sits exactly at x0
    const BathState st = state_at(inv, x0, 0.0);
    CHECK(particle_bath_force(inv, st.positions, x0) ==
          doctest::Approx(0.0).scale(inv.coupling_strength()).epsilon(1e-15));
    CHECK(particle_bath_force(pert, st.positions, x0) ==
          doctest::Approx(pert.coupling_strength() * x0).epsilon(1e-13));
}

TEST_CASE("energy drift shrinks ~4x when dt is halved") {
    ParticleSpec particle;
    particle.potential = harmonic_potential(1.0);
    const DiscreteBath bath = discretize(white_noise_density(1.0, 1.0, 5.0), 32);
    CounterRng stream(17);
    const BathState st = sample_thermal(bath, 1.0, 0.3, 0.0, 0.0, stream);
    ParticleInit init;
    init.x0 = 0.3;
    init.v0 = 0.1;
    FullIntegrationOptions opt;
    opt.record_energy = true;

    auto max_drift = [&](double dt, std::size_t n) {
        const Trajectory traj =
            integrate_full(particle, bath, st, init, constant_profile(0.0), dt, n, opt);
        double drift = 0.0;
        for (double e : traj.energy) drift = std::max(drift, std::abs(e - traj.energy[0]));
        return drift;
    };
    const double d1 = max_drift(0.02, 500);
    const double d2 = max_drift(0.01, 1000);
    CHECK(d1 / d2 > 2.5);
    CHECK(d1 / d2 < 6.5);
    CHECK(d1 > 0.0); // drift must be measurable for the ratio to mean anything
}

TEST_CASE("translation invariance of the invariant coupling") {
    ParticleSpec particle;
    const DiscreteBath bath = discretize(white_noise_density(1.0, 1.0, 10.0), 32);
    CounterRng stream(4);
    const BathState st = sample_thermal(bath, 1.0, 0.0, 0.0, 0.0, stream);
    ParticleInit init;
    init.v0 = 0.2;

    const double shift = 3.7;
    BathState st_shift = st;
    for (double& q : st_shift.positions) q += shift;
    ParticleInit init_shift = init;
    init_shift.x0 = init.x0 + shift;

    const Trajectory a =
        integrate_full(particle, bath, st, init, constant_profile(0.0), 1e-3, 10000);
    const Trajectory b = integrate_full(particle, bath, st_shift, init_shift,
                                        constant_profile(0.0), 1e-3, 10000);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        worst = std::max(worst, std::abs(b.x[k] - a.x[k] - shift));
    CHECK(worst < 1e-10);
}

TEST_CASE("Galilean consistency under a constant boost") {
    ParticleSpec particle;
    const DiscreteBath bath = discretize(white_noise_density(1.0, 1.0, 10.0), 32);
    const double boost = 0.8;
    CounterRng s1(9), s2(9);
    const BathState st_static = sample_thermal(bath, 1.0, 0.0, 0.0, 0.0, s1);
    const BathState st_moving = sample_thermal(bath, 1.0, 0.0, boost, 0.0, s2);
    ParticleInit init;
    init.v0 = 0.3;
    ParticleInit init_boost;
    init_boost.v0 = 0.3 + boost;

    const Trajectory a = integrate_full(particle, bath, st_static, init,
                                        constant_profile(0.0), 1e-3, 10000);
    const Trajectory b = integrate_full(particle, bath, st_moving, init_boost,
                                        constant_profile(boost), 1e-3, 10000);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        worst = std::max(worst, std::abs(b.x[k] - a.x[k] - boost * a.time(k)));
    CHECK(worst < 1e-9);
}

TEST_CASE("zero-dissipation line: co-moving start stays on x0 + v t") {
    ParticleSpec particle;
    const DiscreteBath bath = discretize(white_noise_density(1.0, 1.0, 10.0), 64);
    const double v = 0.6;
    const BathState st = state_at(bath, 0.25, v); // kT = 0 co-moving sample
    ParticleInit init;
    init.x0 = 0.25;
    init.v0 = v;
    const Trajectory traj =
        integrate_full(particle, bath, st, init, constant_profile(v), 1e-3, 10000);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k)
        worst = std::max(worst, std::abs(traj.x[k] - (0.25 + v * traj.time(k))));
    CHECK(worst < 1e-9);
}

TEST_CASE("guards: stability, grid sizes, finiteness") {
    ParticleSpec particle;
    const DiscreteBath bath = make_bath({10.0}, {1.0});
    const BathState st = state_at(bath, 0.0, 0.0);
    ParticleInit init;
    // dt * w_max = 0.6 >= 0.5
    CHECK_THROWS_AS(
        integrate_full(particle, bath, st, init, constant_profile(0.0), 0.06, 10),
        config_error);
    CHECK_THROWS_AS(
        integrate_full(particle, bath, st, init, constant_profile(0.0), 0.0, 10),
        config_error);
    BathState wrong = st;
    wrong.positions.push_back(0.0);
    CHECK_THROWS_AS(
        integrate_full(particle, bath, wrong, init, constant_profile(0.0), 0.01, 10),
        config_error);
}

TEST_CASE("perturbative runaway raises a divergence with its step index") {
    ParticleSpec particle;
    particle.mass = 1e-4; // effective inverted parabola blows up fast
    const DiscreteBath bath = discretize(white_noise_density(1.0, 1.0, 20.0), 64,
                                         CouplingMode::Perturbative);
    CounterRng stream(3);
    const BathState st = sample_thermal(bath, 1.0, 0.5, 0.0, 0.0, stream);
    ParticleInit init;
    init.x0 = 0.5;
    bool caught = false;
    try {
        integrate_full(particle, bath, st, init, constant_profile(0.0), 1e-3, 20000);
    } catch (const divergence_error& e) {
        caught = true;
        CHECK(e.step > 0);
        CHECK(e.step <= 20000);
    }
    CHECK(caught);
}

TEST_CASE("tabulated force reproduces a harmonic trap and guards its domain") {
    ParticleSpec harmonic;
    harmonic.potential = harmonic_potential(1.0);
    ParticleSpec tabulated;
    {
        std::vector<double> xs, fs;
        for (int i = -100; i <= 100; ++i) {
            xs.push_back(0.1 * i);
            fs.push_back(-0.1 * i); // f = -x, matches M w0^2 = 1
        }
        tabulated.potential = tabulated_force(xs, fs);
    }
    const DiscreteBath empty = make_bath({}, {});
    ParticleInit init;
    init.x0 = 1.0;
    const Trajectory a = integrate_full(harmonic, empty, state_at(empty, 0.0, 0.0), init,
                                        constant_profile(0.0), 1e-3, 2000);
    const Trajectory b = integrate_full(tabulated, empty, state_at(empty, 0.0, 0.0), init,
                                        constant_profile(0.0), 1e-3, 2000);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        worst = std::max(worst, std::abs(a.x[k] - b.x[k]));
    CHECK(worst < 1e-10);

    ParticleInit runaway;
    runaway.v0 = 100.0; // leaves the tabulated domain quickly
    CHECK_THROWS_AS(integrate_full(tabulated, empty, state_at(empty, 0.0, 0.0), runaway,
                                   constant_profile(0.0), 1e-3, 2000),
                    config_error);
}

TEST_CASE("parallel oscillator loop matches the serial reference") {
    ParticleSpec particle;
    particle.potential = harmonic_potential(0.5);
    const DiscreteBath bath = discretize(white_noise_density(1.0, 1.0, 10.0), 600);
    CounterRng stream(11);
    const BathState st = sample_thermal(bath, 1.0, 0.0, 0.0, 0.0, stream);
    ParticleInit init;
    init.v0 = 0.4;
    const Trajectory par =
        integrate_full(particle, bath, st, init, constant_profile(0.0), 1e-3, 300);
    const Trajectory ser =
        ref::integrate_full(particle, bath, st, init, constant_profile(0.0), 1e-3, 300);
    for (std::size_t k = 0; k < par.size(); ++k) {
        CHECK(par.x[k] == doctest::Approx(ser.x[k]).epsilon(1e-10));
        CHECK(par.v[k] == doctest::Approx(ser.v[k]).epsilon(1e-10));
    }
}
