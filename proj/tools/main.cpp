#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "oscbath/errors.hpp"
#include "oscbath/parallel.hpp"
#include "oscbath/scenario.hpp"

namespace {

const char* subcommand_help(const std::string& name) {
    if (name == "kernel") return "tabulate the friction (and quantum noise) kernels";
    if (name == "sample") return "draw thermal bath realizations";
    if (name == "simulate-full") return "integrate the explicit particle+bath system";
    if (name == "simulate-gle") return "integrate the memory (generalized Langevin) equation";
    if (name == "simulate-langevin") return "integrate the white-noise Langevin limit";
    if (name == "fdt") return "Monte Carlo check of the noise moments against k_B T u";
    if (name == "compare") return "distance between two trajectory CSV files";
    if (name == "influence") return "environment phase for a mean/difference path pair";
    return "ensemble statistics over many realizations";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"oscbath: a Brownian particle in a static or drifting oscillator bath"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool out_set = false;
    int threads = 0;
    std::string chosen;

    for (const auto& name : oscbath::scenario_subcommands) {
        CLI::App* sub = app.add_subcommand(name, subcommand_help(name));
        sub->add_option("--scenario", scenario_path, "scenario JSON file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides the scenario)")
            ->each([&out_set](const std::string&) { out_set = true; });
        sub->add_option("--seed", seed, "base seed (overrides the scenario)")
            ->each([&seed_set](const std::string&) { seed_set = true; });
        sub->add_option("--threads", threads, "worker thread cap (OSCBATH_THREADS wins)");
        sub->callback([&chosen, name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // bad usage is a configuration error
    }

    if (const char* env = std::getenv("OSCBATH_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || n < 1) {
            std::cerr << "error: OSCBATH_THREADS must be a positive integer\n";
            return 2;
        }
        threads = static_cast<int>(n);
    }
    if (threads > 0) oscbath::set_threads(threads);

    try {
        oscbath::Scenario scenario = oscbath::load_scenario(scenario_path);
        if (out_set) scenario.out_dir = out_dir;
        if (seed_set) {
            scenario.base_seed = seed;
            scenario.has_base_seed = true;
        }
        const int rc = oscbath::run_scenario(scenario, chosen);
        if (rc == 0)
            std::cout << chosen << ": ok, artifacts in " << scenario.out_dir << "\n";
        else
            std::cerr << chosen << ": gate failed, see " << scenario.out_dir
                      << "/summary.csv\n";
        return rc;
    } catch (const oscbath::divergence_error& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return 3;
    } catch (const oscbath::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
