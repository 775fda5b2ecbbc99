#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "oscbath/gle.hpp"
#include "oscbath/microdynamics.hpp"
#include "oscbath/potential.hpp"
#include "oscbath/profile.hpp"
#include "oscbath/spectral.hpp"
#include "oscbath/thermal.hpp"
#include "oscbath/trajectory.hpp"

namespace oscbath {

enum class SimKind { Full, Gle, LangevinWhite };

// Everything one realization needs; realization r draws from substream r of
// base_seed, so the ensemble is reproducible under any parallel schedule.
struct EnsembleSpec {
    SimKind kind = SimKind::LangevinWhite;
    ParticleSpec particle;
    DiscreteBath bath;    // Full / Gle
    double eta = 0.0;     // LangevinWhite
    double temperature = 0.0; // thermal energy k_B*T
    ParticleInit init;
    double x_width = 0.0; // Gaussian spread of the particle initial data
    double v_width = 0.0;
    VelocityProfile profile = constant_profile(0.0);
    double t0 = 0.0;
    double dt = 0.0;
    std::size_t n_steps = 0;

    bool collect_noise_moments = false; // Gle only
    std::size_t noise_grid_max = 32;

    // Optional drift gates (free particle, constant v_env, LangevinWhite):
    // fitted relaxation rate of <v> - v_env vs eta/M, and the stationary mean.
    bool drift_checks = false;
    double rate_tolerance = 0.02;
};

struct GateResult {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct EnsembleReport {
    std::size_t realizations = 0;
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> mean_x, se_x;
    std::vector<double> mean_v, var_v;
    std::vector<double> msd; // <(x(t) - x(t0))^2>
    bool se_defined = true;  // false when realizations == 1

    // Noise moments on a coarse subgrid (Gle with collect_noise_moments).
    std::vector<double> noise_times;
    std::vector<double> noise_mean, noise_mean_se;
    std::vector<double> noise_cov;    // row-major G x G, <R(t_g) R(t_h)>
    std::vector<double> noise_target; // temperature * u(|t_g - t_h|)

    std::vector<GateResult> gates;
};

EnsembleReport run_ensemble(const EnsembleSpec& spec, std::size_t realizations,
                            std::uint64_t base_seed);

struct FdtReport {
    std::vector<double> times;
    std::vector<double> mean_R, se_R;
    std::vector<double> cov;    // row-major G x G
    std::vector<double> cov_se;
    std::vector<double> target; // temperature * u(t-s)
    double max_mean_sigmas = 0.0; // max |<R>| / se
    double max_cov_dev = 0.0;     // max |<RR> - target| / (temperature*u(0)), net of 3 se
    double tolerance = 0.05;
    bool mean_pass = false;
    bool cov_pass = false;
};

// Monte Carlo check of <R> = 0 and <R(t)R(s)> = k_B T u(t-s) over fresh
// thermal samples on the grid t0 + k*dt, k < n_points (n_points <= 64).
FdtReport fdt_check(const DiscreteBath& bath, double temperature, std::size_t realizations,
                    double t0, double dt, std::size_t n_points,
                    const VelocityProfile& profile, std::uint64_t base_seed,
                    double tolerance = 0.05);

struct TrajectoryDistance {
    double rms = 0.0;
    double max_abs = 0.0;
};

// Position-series distance; grids must agree exactly.
TrajectoryDistance compare_trajectories(const Trajectory& a, const Trajectory& b);

// Least-squares slope of y(t) over the index window [i_lo, i_hi].
double fit_linear_slope(const std::vector<double>& t, const std::vector<double>& y,
                        std::size_t i_lo, std::size_t i_hi);

// Rate of y(t) = y_inf + (y[0]-y_inf) e^{-r (t-t[0])}: coarse scan around
// rate_guess on t-t[0] <= 3/guess, then golden-section refinement with
// variance weights 1/(1 - e^{-2 r t}) on t-t[0] <= 5/r.
double fit_relaxation_rate(const std::vector<double>& t, const std::vector<double>& y,
                           double y_inf, double rate_guess);

} // namespace oscbath
