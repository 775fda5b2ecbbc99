#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "oscbath/ensemble.hpp"
#include "oscbath/errors.hpp"
#include "oscbath/potential.hpp"
#include "oscbath/profile.hpp"
#include "oscbath/spectral.hpp"
#include "oscbath/thermal.hpp"

namespace oscbath {

// Parsed scenario document. Silent defaults exist only for k_B, hbar and the
// output precision; everything else a subcommand needs must be present (the
// dispatcher reports what is missing).
struct Scenario {
    double k_B = 1.0;
    double hbar = 1.0;
    int precision = 17;
    std::string out_dir = "out";
    std::filesystem::path base_dir = "."; // directory of the scenario file

    ParticleSpec particle;
    ParticleInit init;
    double x_width = 0.0, v_width = 0.0;
    bool has_particle = false;

    bool has_bath = false;
    bool bath_explicit = false;
    SpectralDensity density = white_noise_density(1.0, 1.0, 1.0);
    std::size_t n_oscillators = 0;
    DiscreteBath explicit_bath;
    CouplingMode coupling = CouplingMode::Invariant;

    double temperature = 0.0; // plain T; thermal energy is k_B * temperature
    bool has_temperature = false;

    VelocityProfile profile = constant_profile(0.0);

    bool has_integrator = false;
    double t0 = 0.0;
    double dt = 0.0;
    std::size_t n_steps = 0;
    bool record_energy = false;

    bool has_ensemble = false;
    std::size_t realizations = 0;
    std::uint64_t base_seed = 0;
    bool has_base_seed = false;
    std::string dynamics; // "full" | "gle" | "langevin"
    bool noise_moments = false;
    std::size_t noise_grid = 32;
    bool drift_checks = false;
    double rate_tolerance = 0.02;

    bool has_langevin = false;
    double langevin_eta = 0.0;

    std::size_t kernel_points = 0; // 0: use n_steps + 1
    bool kernel_quantum = false;

    bool has_influence = false;
    std::string influence_path_file;

    bool has_compare = false;
    std::string compare_first, compare_second;
    bool has_compare_gate = false;
    double compare_gate = 0.0;

    bool has_fdt = false;
    std::size_t fdt_realizations = 0;
    std::size_t fdt_grid = 32;
    double fdt_horizon = 0.0;
    double fdt_tolerance = 0.05;

    std::size_t sample_count = 1;
};

// Carries every violation found, not just the first.
class scenario_error : public config_error {
public:
    scenario_error(const std::string& msg, std::vector<std::string> violation_list)
        : config_error(msg), violations(std::move(violation_list)) {}
    std::vector<std::string> violations;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& file);

// Bath described by the scenario (explicit or discretized density).
DiscreteBath scenario_bath(const Scenario& scenario);

// Dispatch one subcommand; writes CSV artifacts into scenario.out_dir.
// Returns 0 on success, 1 when an acceptance gate inside the scenario fails.
// Configuration problems throw config_error, blow-ups throw divergence_error.
int run_scenario(const Scenario& scenario, const std::string& subcommand);

extern const std::vector<std::string> scenario_subcommands;

} // namespace oscbath
