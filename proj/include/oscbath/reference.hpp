#pragma once

// Plain serial implementations of the parallelized hot loops. Kept as the
// correctness baseline for the tests and as the reference side of the
// benchmark; no pragmas, straight accumulation order.

#include "oscbath/gle.hpp"
#include "oscbath/influence.hpp"
#include "oscbath/microdynamics.hpp"
#include "oscbath/spectral.hpp"

namespace oscbath::ref {

Kernel kernel_u(const DiscreteBath& bath, const std::vector<double>& tau_grid);
Kernel kernel_alpha(const DiscreteBath& bath, const std::vector<double>& tau_grid,
                    double temperature, double hbar);
NoiseRecord noise_force(const DiscreteBath& bath, const BathState& bath_state,
                        double x0, const VelocityProfile& profile, double dt,
                        std::size_t n_points);
InfluencePhase influence_phase(const Kernel& kernel_u, const Kernel& kernel_alpha,
                               const PathPair& path, const VelocityProfile& profile);
Trajectory integrate_gle(const ParticleSpec& particle, const Kernel& kernel_u,
                         const NoiseRecord& noise, const ParticleInit& init,
                         const VelocityProfile& profile, double dt,
                         std::size_t n_steps);
Trajectory integrate_full(const ParticleSpec& particle, const DiscreteBath& bath,
                          const BathState& bath_state, const ParticleInit& init,
                          const VelocityProfile& profile, double dt,
                          std::size_t n_steps);

} // namespace oscbath::ref
