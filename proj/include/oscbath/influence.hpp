#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "oscbath/profile.hpp"
#include "oscbath/spectral.hpp"

namespace oscbath {

// Discretized mean path X(t) and difference path xi(t) on the uniform grid
// t0 + k*dt (X = (x + x')/2, xi = x' - x).
struct PathPair {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> X;
    std::vector<double> xi;

    std::size_t size() const { return X.size(); }
};

struct ThermalOscillator {
    double mass;
    double omega;
    double beta; // inverse thermal energy 1/(k_B T)
    double hbar;
};

// Environment contribution to the phase of the reduced propagator,
// F = exp(i dS / hbar): Re dS is the dissipative (friction) part, Im dS >= 0
// damps off-diagonal coherence.
struct InfluencePhase {
    double real_part = 0.0;
    double imag_part = 0.0;
};

// rho(q, q') of one thermal oscillator centered at `center`, co-moving with
// the environment at velocity v_env (unit-modulus phase factor).
std::complex<double> thermal_density_matrix(const ThermalOscillator& osc, double q,
                                            double q_prime, double center,
                                            double v_env);

// dS = int dt int_{<=t} ds xi(t) { u(t-s) [Xdot(s) - v_env(s)] + i a(t-s) xi(s) }.
// Real part: trapezoid over the triangle s <= t, diagonal weight 1/2.
// Imaginary part: symmetrized square trapezoid rule, positive semidefinite by
// construction, so Im dS >= 0 for every real path (up to round-off).
// Xdot uses centered differences inside, three-point one-sided at the ends.
// Kernel grids must match the path step and cover all lags.
InfluencePhase influence_phase(const Kernel& kernel_u, const Kernel& kernel_alpha,
                               const PathPair& path, const VelocityProfile& profile);

} // namespace oscbath
