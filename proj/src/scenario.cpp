#include "oscbath/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oscbath/csv.hpp"
#include "oscbath/influence.hpp"
#include "oscbath/reference.hpp"

namespace oscbath {

using nlohmann::json;

const std::vector<std::string> scenario_subcommands = {
    "kernel",        "sample",  "simulate-full", "simulate-gle", "simulate-langevin",
    "fdt",           "compare", "influence",     "ensemble"};

namespace {

struct Issues {
    std::vector<std::string> list;
    void add(const std::string& path, const std::string& msg) {
        list.push_back(path + ": " + msg);
    }
};

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed, Issues& issues) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok) issues.add(path + "." + it.key(), "unknown key");
    }
}

std::optional<double> get_number(const json& obj, const std::string& path,
                                 const char* key, Issues& issues) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_number()) {
        issues.add(path + "." + key, "expected a number");
        return std::nullopt;
    }
    return v.get<double>();
}

std::optional<std::size_t> get_count(const json& obj, const std::string& path,
                                     const char* key, Issues& issues) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    double d = 0.0;
    if (v.is_number()) d = v.get<double>();
    if (!v.is_number() || d < 0.0 || d != std::floor(d)) {
        issues.add(path + "." + key, "expected a nonnegative integer");
        return std::nullopt;
    }
    return static_cast<std::size_t>(d);
}

std::optional<std::uint64_t> get_seed(const json& obj, const std::string& path,
                                      const char* key, Issues& issues) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    issues.add(path + "." + key, "expected a nonnegative integer");
    return std::nullopt;
}

std::optional<bool> get_bool(const json& obj, const std::string& path, const char* key,
                             Issues& issues) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_boolean()) {
        issues.add(path + "." + key, "expected true or false");
        return std::nullopt;
    }
    return v.get<bool>();
}

std::optional<std::string> get_string(const json& obj, const std::string& path,
                                      const char* key, Issues& issues) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_string()) {
        issues.add(path + "." + key, "expected a string");
        return std::nullopt;
    }
    return v.get<std::string>();
}

std::optional<std::vector<double>> get_array(const json& obj, const std::string& path,
                                             const char* key, Issues& issues) {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_array()) {
        issues.add(path + "." + key, "expected an array of numbers");
        return std::nullopt;
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number()) {
            issues.add(path + "." + key, "expected an array of numbers");
            return std::nullopt;
        }
        out.push_back(e.get<double>());
    }
    return out;
}

const json* get_section(const json& root, const char* name, Issues& issues) {
    if (!root.contains(name)) return nullptr;
    const json& v = root.at(name);
    if (!v.is_object()) {
        issues.add(name, "expected an object");
        return nullptr;
    }
    return &v;
}

void parse_particle(const json& sec, Scenario& s, Issues& issues) {
    s.has_particle = true;
    check_keys(sec, "particle",
               {"mass", "potential", "omega0", "force_x", "force_f", "force_time",
                "force_factor", "x0", "v0", "x_width", "v_width"},
               issues);
    if (auto m = get_number(sec, "particle", "mass", issues)) {
        if (*m > 0.0)
            s.particle.mass = *m;
        else
            issues.add("particle.mass", "must be > 0");
    }
    if (auto x = get_number(sec, "particle", "x0", issues)) s.init.x0 = *x;
    if (auto v = get_number(sec, "particle", "v0", issues)) s.init.v0 = *v;
    if (auto w = get_number(sec, "particle", "x_width", issues)) {
        if (*w >= 0.0)
            s.x_width = *w;
        else
            issues.add("particle.x_width", "must be >= 0");
    }
    if (auto w = get_number(sec, "particle", "v_width", issues)) {
        if (*w >= 0.0)
            s.v_width = *w;
        else
            issues.add("particle.v_width", "must be >= 0");
    }
    const auto kind = get_string(sec, "particle", "potential", issues);
    if (!kind) return;
    try {
        if (*kind == "free") {
            s.particle.potential = free_potential();
        } else if (*kind == "harmonic") {
            const auto w0 = get_number(sec, "particle", "omega0", issues);
            if (!w0) {
                issues.add("particle.omega0", "required for the harmonic potential");
                return;
            }
            s.particle.potential = harmonic_potential(*w0);
        } else if (*kind == "tabulated-force") {
            const auto xs = get_array(sec, "particle", "force_x", issues);
            const auto fs = get_array(sec, "particle", "force_f", issues);
            if (!xs || !fs) {
                issues.add("particle", "tabulated-force needs force_x and force_f");
                return;
            }
            const auto ts = get_array(sec, "particle", "force_time", issues);
            const auto gs = get_array(sec, "particle", "force_factor", issues);
            s.particle.potential =
                tabulated_force(*xs, *fs, ts.value_or(std::vector<double>{}),
                                gs.value_or(std::vector<double>{}));
        } else {
            issues.add("particle.potential",
                       "expected free, harmonic or tabulated-force");
        }
    } catch (const config_error& e) {
        issues.add("particle", e.what());
    }
}

void parse_bath(const json& sec, Scenario& s, Issues& issues) {
    s.has_bath = true;
    check_keys(sec, "bath",
               {"type", "eta", "osc_mass", "cutoff", "n_oscillators", "coupling",
                "omega_grid", "g_values", "frequencies", "masses"},
               issues);
    if (auto c = get_string(sec, "bath", "coupling", issues)) {
        if (*c == "invariant")
            s.coupling = CouplingMode::Invariant;
        else if (*c == "perturbative")
            s.coupling = CouplingMode::Perturbative;
        else
            issues.add("bath.coupling", "expected invariant or perturbative");
    }
    const auto kind = get_string(sec, "bath", "type", issues);
    if (!kind) {
        issues.add("bath.type", "required");
        return;
    }
    try {
        if (*kind == "white-noise") {
            const auto eta = get_number(sec, "bath", "eta", issues);
            const auto m = get_number(sec, "bath", "osc_mass", issues);
            const auto cut = get_number(sec, "bath", "cutoff", issues);
            const auto n = get_count(sec, "bath", "n_oscillators", issues);
            if (!eta || !m || !cut || !n) {
                issues.add("bath", "white-noise needs eta, osc_mass, cutoff, n_oscillators");
                return;
            }
            s.density = white_noise_density(*eta, *m, *cut);
            s.n_oscillators = *n;
            if (*n < 1) issues.add("bath.n_oscillators", "must be >= 1");
        } else if (*kind == "tabulated") {
            const auto og = get_array(sec, "bath", "omega_grid", issues);
            const auto gv = get_array(sec, "bath", "g_values", issues);
            const auto n = get_count(sec, "bath", "n_oscillators", issues);
            if (!og || !gv || !n) {
                issues.add("bath", "tabulated needs omega_grid, g_values, n_oscillators");
                return;
            }
            s.density = tabulated_density(*og, *gv);
            s.n_oscillators = *n;
            if (*n < 1) issues.add("bath.n_oscillators", "must be >= 1");
        } else if (*kind == "explicit") {
            const auto fr = get_array(sec, "bath", "frequencies", issues);
            const auto ms = get_array(sec, "bath", "masses", issues);
            if (!fr || !ms) {
                issues.add("bath", "explicit needs frequencies and masses");
                return;
            }
            s.bath_explicit = true;
            s.explicit_bath = make_bath(*fr, *ms, s.coupling);
        } else {
            issues.add("bath.type", "expected white-noise, tabulated or explicit");
        }
    } catch (const config_error& e) {
        issues.add("bath", e.what());
    }
}

void parse_profile(const json& sec, Scenario& s, Issues& issues) {
    check_keys(sec, "profile",
               {"type", "v", "v0", "accel", "amplitude", "angular_frequency", "phase",
                "times", "values"},
               issues);
    const auto kind = get_string(sec, "profile", "type", issues);
    if (!kind) {
        issues.add("profile.type", "required");
        return;
    }
    try {
        if (*kind == "constant") {
            const auto v = get_number(sec, "profile", "v", issues);
            if (!v) {
                issues.add("profile.v", "required for a constant profile");
                return;
            }
            s.profile = constant_profile(*v);
        } else if (*kind == "ramp") {
            const auto v0 = get_number(sec, "profile", "v0", issues);
            const auto a = get_number(sec, "profile", "accel", issues);
            if (!v0 || !a) {
                issues.add("profile", "ramp needs v0 and accel");
                return;
            }
            s.profile = ramp_profile(*v0, *a);
        } else if (*kind == "sinusoid") {
            const auto A = get_number(sec, "profile", "amplitude", issues);
            const auto w = get_number(sec, "profile", "angular_frequency", issues);
            const auto p = get_number(sec, "profile", "phase", issues);
            if (!A || !w || !p) {
                issues.add("profile", "sinusoid needs amplitude, angular_frequency, phase");
                return;
            }
            s.profile = sinusoid_profile(*A, *w, *p);
        } else if (*kind == "tabulated") {
            const auto ts = get_array(sec, "profile", "times", issues);
            const auto vs = get_array(sec, "profile", "values", issues);
            if (!ts || !vs) {
                issues.add("profile", "tabulated needs times and values");
                return;
            }
            s.profile = tabulated_profile(*ts, *vs);
        } else {
            issues.add("profile.type", "expected constant, ramp, sinusoid or tabulated");
        }
    } catch (const config_error& e) {
        issues.add("profile", e.what());
    }
}

std::string join_issues(const std::vector<std::string>& issues) {
    std::string msg = "invalid scenario:";
    for (const auto& i : issues) msg += "\n  - " + i;
    return msg;
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw scenario_error(std::string("scenario: ") + e.what(), {e.what()});
    }

    Issues issues;
    Scenario s;
    if (!root.is_object()) {
        issues.add("scenario", "top level must be an object");
        throw scenario_error(join_issues(issues.list), issues.list);
    }

    check_keys(root, "scenario",
               {"constants", "particle", "bath", "temperature", "profile", "integrator",
                "ensemble", "langevin", "kernel", "influence", "compare", "fdt", "sample",
                "output"},
               issues);

    if (const json* sec = get_section(root, "constants", issues)) {
        check_keys(*sec, "constants", {"k_B", "hbar"}, issues);
        if (auto v = get_number(*sec, "constants", "k_B", issues)) {
            if (*v > 0.0)
                s.k_B = *v;
            else
                issues.add("constants.k_B", "must be > 0");
        }
        if (auto v = get_number(*sec, "constants", "hbar", issues)) {
            if (*v > 0.0)
                s.hbar = *v;
            else
                issues.add("constants.hbar", "must be > 0");
        }
    }

    if (const json* sec = get_section(root, "particle", issues))
        parse_particle(*sec, s, issues);
    if (const json* sec = get_section(root, "bath", issues)) parse_bath(*sec, s, issues);

    if (root.contains("temperature")) {
        if (!root.at("temperature").is_number()) {
            issues.add("temperature", "expected a number");
        } else {
            const double T = root.at("temperature").get<double>();
            if (T < 0.0)
                issues.add("temperature", "must be >= 0");
            else {
                s.temperature = T;
                s.has_temperature = true;
            }
        }
    }

    if (const json* sec = get_section(root, "profile", issues))
        parse_profile(*sec, s, issues);

    if (const json* sec = get_section(root, "integrator", issues)) {
        s.has_integrator = true;
        check_keys(*sec, "integrator", {"t0", "dt", "n_steps", "record_energy"}, issues);
        if (auto v = get_number(*sec, "integrator", "t0", issues)) s.t0 = *v;
        if (auto v = get_number(*sec, "integrator", "dt", issues)) {
            if (*v > 0.0)
                s.dt = *v;
            else
                issues.add("integrator.dt", "must be > 0");
        } else {
            issues.add("integrator.dt", "required");
        }
        if (auto v = get_count(*sec, "integrator", "n_steps", issues)) {
            if (*v >= 1)
                s.n_steps = *v;
            else
                issues.add("integrator.n_steps", "must be >= 1");
        } else {
            issues.add("integrator.n_steps", "required");
        }
        if (auto v = get_bool(*sec, "integrator", "record_energy", issues))
            s.record_energy = *v;
    }

    if (const json* sec = get_section(root, "ensemble", issues)) {
        s.has_ensemble = true;
        check_keys(*sec, "ensemble",
                   {"realizations", "base_seed", "dynamics", "noise_moments", "noise_grid",
                    "drift_checks", "rate_tolerance"},
                   issues);
        if (auto v = get_count(*sec, "ensemble", "realizations", issues)) {
            if (*v >= 1)
                s.realizations = *v;
            else
                issues.add("ensemble.realizations", "must be >= 1");
        }
        if (auto v = get_seed(*sec, "ensemble", "base_seed", issues)) {
            s.base_seed = *v;
            s.has_base_seed = true;
        }
        if (auto v = get_string(*sec, "ensemble", "dynamics", issues)) {
            if (*v == "full" || *v == "gle" || *v == "langevin")
                s.dynamics = *v;
            else
                issues.add("ensemble.dynamics", "expected full, gle or langevin");
        }
        if (auto v = get_bool(*sec, "ensemble", "noise_moments", issues))
            s.noise_moments = *v;
        if (auto v = get_count(*sec, "ensemble", "noise_grid", issues)) {
            if (*v >= 2)
                s.noise_grid = *v;
            else
                issues.add("ensemble.noise_grid", "must be >= 2");
        }
        if (auto v = get_bool(*sec, "ensemble", "drift_checks", issues))
            s.drift_checks = *v;
        if (auto v = get_number(*sec, "ensemble", "rate_tolerance", issues)) {
            if (*v > 0.0)
                s.rate_tolerance = *v;
            else
                issues.add("ensemble.rate_tolerance", "must be > 0");
        }
    }

    if (const json* sec = get_section(root, "langevin", issues)) {
        s.has_langevin = true;
        check_keys(*sec, "langevin", {"eta"}, issues);
        if (auto v = get_number(*sec, "langevin", "eta", issues)) {
            if (*v >= 0.0)
                s.langevin_eta = *v;
            else
                issues.add("langevin.eta", "must be >= 0");
        } else {
            issues.add("langevin.eta", "required");
        }
    }

    if (const json* sec = get_section(root, "kernel", issues)) {
        check_keys(*sec, "kernel", {"n_points", "quantum"}, issues);
        if (auto v = get_count(*sec, "kernel", "n_points", issues)) {
            if (*v >= 1)
                s.kernel_points = *v;
            else
                issues.add("kernel.n_points", "must be >= 1");
        }
        if (auto v = get_bool(*sec, "kernel", "quantum", issues)) s.kernel_quantum = *v;
    }

    if (const json* sec = get_section(root, "influence", issues)) {
        s.has_influence = true;
        check_keys(*sec, "influence", {"path_file"}, issues);
        if (auto v = get_string(*sec, "influence", "path_file", issues))
            s.influence_path_file = *v;
        else
            issues.add("influence.path_file", "required");
    }

    if (const json* sec = get_section(root, "compare", issues)) {
        s.has_compare = true;
        check_keys(*sec, "compare", {"first", "second", "rms_gate"}, issues);
        if (auto v = get_string(*sec, "compare", "first", issues))
            s.compare_first = *v;
        else
            issues.add("compare.first", "required");
        if (auto v = get_string(*sec, "compare", "second", issues))
            s.compare_second = *v;
        else
            issues.add("compare.second", "required");
        if (auto v = get_number(*sec, "compare", "rms_gate", issues)) {
            if (*v > 0.0) {
                s.compare_gate = *v;
                s.has_compare_gate = true;
            } else {
                issues.add("compare.rms_gate", "must be > 0");
            }
        }
    }

    if (const json* sec = get_section(root, "fdt", issues)) {
        s.has_fdt = true;
        check_keys(*sec, "fdt", {"realizations", "grid_points", "horizon", "tolerance", "t0"},
                   issues);
        if (auto v = get_count(*sec, "fdt", "realizations", issues))
            s.fdt_realizations = *v;
        else
            issues.add("fdt.realizations", "required");
        if (auto v = get_count(*sec, "fdt", "grid_points", issues)) {
            if (*v >= 2)
                s.fdt_grid = *v;
            else
                issues.add("fdt.grid_points", "must be >= 2");
        }
        if (auto v = get_number(*sec, "fdt", "horizon", issues)) {
            if (*v > 0.0)
                s.fdt_horizon = *v;
            else
                issues.add("fdt.horizon", "must be > 0");
        } else {
            issues.add("fdt.horizon", "required");
        }
        if (auto v = get_number(*sec, "fdt", "tolerance", issues)) {
            if (*v > 0.0)
                s.fdt_tolerance = *v;
            else
                issues.add("fdt.tolerance", "must be > 0");
        }
        if (auto v = get_number(*sec, "fdt", "t0", issues)) s.t0 = *v;
    }

    if (const json* sec = get_section(root, "sample", issues)) {
        check_keys(*sec, "sample", {"count"}, issues);
        if (auto v = get_count(*sec, "sample", "count", issues)) {
            if (*v >= 1)
                s.sample_count = *v;
            else
                issues.add("sample.count", "must be >= 1");
        }
    }

    if (const json* sec = get_section(root, "output", issues)) {
        check_keys(*sec, "output", {"directory", "precision"}, issues);
        if (auto v = get_string(*sec, "output", "directory", issues)) s.out_dir = *v;
        if (auto v = get_count(*sec, "output", "precision", issues)) {
            if (*v >= 1 && *v <= 17)
                s.precision = static_cast<int>(*v);
            else
                issues.add("output.precision", "must be between 1 and 17");
        }
    }

    if (!issues.list.empty()) throw scenario_error(join_issues(issues.list), issues.list);
    return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw config_error("scenario: cannot open '" + file.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    Scenario s = parse_scenario(ss.str());
    s.base_dir = file.has_parent_path() ? file.parent_path() : std::filesystem::path(".");
    return s;
}

DiscreteBath scenario_bath(const Scenario& scenario) {
    if (!scenario.has_bath) throw config_error("scenario: a bath section is required");
    if (scenario.bath_explicit) return scenario.explicit_bath;
    return discretize(scenario.density, scenario.n_oscillators, scenario.coupling);
}

namespace {

namespace fs = std::filesystem;

void need(bool cond, const std::string& msg) {
    if (!cond) throw config_error("scenario: " + msg);
}

fs::path resolve(const Scenario& s, const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : s.base_dir / path;
}

struct SummaryRow {
    std::string metric;
    double value;
    double tolerance; // nan: informational
    double pass;      // 1/0, nan: informational
};

void write_summary(const fs::path& out, const std::vector<SummaryRow>& rows,
                   int precision) {
    std::ofstream f(out);
    if (!f) throw config_error("scenario: cannot write '" + out.string() + "'");
    f << "metric,value,tolerance,pass\n";
    for (const auto& r : rows)
        f << r.metric << ',' << format_double(r.value, precision) << ','
          << format_double(r.tolerance, precision) << ','
          << format_double(r.pass, precision) << '\n';
}

void write_trajectory(const fs::path& out, const Trajectory& traj, int precision) {
    CsvTable table;
    table.header = {"t", "x", "v"};
    std::vector<double> t(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) t[k] = traj.time(k);
    table.columns = {std::move(t), traj.x, traj.v};
    if (!traj.energy.empty()) {
        table.header.push_back("energy");
        table.columns.push_back(traj.energy);
    }
    write_csv(out, table, precision);
}

Trajectory read_trajectory(const fs::path& file) {
    const CsvTable table = read_csv(file);
    const auto& t = table.column("t");
    const auto& x = table.column("x");
    if (t.size() < 2) throw config_error("trajectory csv: need at least two rows");
    Trajectory traj;
    traj.t0 = t[0];
    traj.dt = t[1] - t[0];
    traj.x = x;
    for (std::size_t i = 0; i < table.header.size(); ++i)
        if (table.header[i] == "v") traj.v = table.columns[i];
    if (traj.v.empty()) traj.v.assign(t.size(), 0.0);
    return traj;
}

CounterRng scenario_stream(const Scenario& s) {
    need(s.has_base_seed, "ensemble.base_seed (or --seed) is required here");
    return CounterRng(s.base_seed);
}

int run_kernel(const Scenario& s) {
    const DiscreteBath bath = scenario_bath(s);
    std::size_t n_points = s.kernel_points;
    if (n_points == 0) {
        need(s.has_integrator, "kernel.n_points or an integrator section is required");
        n_points = s.n_steps + 1;
    }
    need(s.has_integrator, "integrator.dt is required for the kernel grid");
    const Kernel u = kernel_u(bath, s.dt, n_points);
    CsvTable table;
    table.header = {"tau", "u"};
    table.columns = {u.tau_grid, u.values};
    write_csv(fs::path(s.out_dir) / "kernel_u.csv", table, s.precision);

    if (s.kernel_quantum) {
        need(s.has_temperature, "temperature is required for the quantum kernel");
        const Kernel a =
            kernel_alpha(bath, s.dt, n_points, s.k_B * s.temperature, s.hbar);
        CsvTable qt;
        qt.header = {"tau", "alpha"};
        qt.columns = {a.tau_grid, a.values};
        write_csv(fs::path(s.out_dir) / "kernel_alpha.csv", qt, s.precision);
    }

    const double nan = std::nan("");
    write_summary(fs::path(s.out_dir) / "summary.csv",
                  {{"u_at_zero_lag", u.values[0], nan, nan},
                   {"coupling_strength", bath.coupling_strength(), nan, nan},
                   {"bath_size", static_cast<double>(bath.size()), nan, nan}},
                  s.precision);
    return 0;
}

int run_sample(const Scenario& s) {
    const DiscreteBath bath = scenario_bath(s);
    need(s.has_temperature, "temperature is required to sample the bath");
    const CounterRng root = scenario_stream(s);
    const double v_env0 = velocity_at(s.profile, s.t0).v;

    CsvTable table;
    table.header = {"realization", "index", "omega", "mass", "q", "qdot"};
    table.columns.assign(6, {});
    for (std::size_t r = 0; r < s.sample_count; ++r) {
        CounterRng stream = root.substream(r);
        const BathState state = sample_thermal(bath, s.k_B * s.temperature, s.init.x0,
                                               v_env0, s.t0, stream);
        for (std::size_t n = 0; n < bath.size(); ++n) {
            table.columns[0].push_back(static_cast<double>(r));
            table.columns[1].push_back(static_cast<double>(n));
            table.columns[2].push_back(bath.frequencies[n]);
            table.columns[3].push_back(bath.masses[n]);
            table.columns[4].push_back(state.positions[n]);
            table.columns[5].push_back(state.velocities[n]);
        }
    }
    write_csv(fs::path(s.out_dir) / "bath_state.csv", table, s.precision);
    return 0;
}

int run_simulate(const Scenario& s, const std::string& sub) {
    need(s.has_integrator, "an integrator section is required");
    need(s.has_temperature, "temperature is required");
    CounterRng root = scenario_stream(s);
    CounterRng stream = root.substream(0); // same draws as ensemble realization 0
    const ParticleInit init = sample_particle(s.init, s.x_width, s.v_width, stream);

    Trajectory traj;
    if (sub == "simulate-langevin") {
        need(s.has_langevin, "a langevin section is required");
        traj = integrate_langevin_white(s.particle, s.langevin_eta,
                                        s.k_B * s.temperature, init, s.profile, s.dt,
                                        s.n_steps, stream, s.t0);
    } else {
        const DiscreteBath bath = scenario_bath(s);
        const BathState state =
            sample_thermal(bath, s.k_B * s.temperature, init.x0,
                           velocity_at(s.profile, s.t0).v, s.t0, stream);
        if (sub == "simulate-full") {
            FullIntegrationOptions options;
            options.record_energy = s.record_energy;
            traj = integrate_full(s.particle, bath, state, init, s.profile, s.dt,
                                  s.n_steps, options);
        } else {
            const Kernel u = kernel_u(bath, s.dt, s.n_steps + 1);
            const NoiseRecord noise =
                noise_force(bath, state, init.x0, s.profile, s.dt, s.n_steps + 1);
            CsvTable nt;
            nt.header = {"t", "R"};
            std::vector<double> times(noise.size());
            for (std::size_t k = 0; k < noise.size(); ++k)
                times[k] = noise.t0 + static_cast<double>(k) * noise.dt;
            nt.columns = {std::move(times), noise.values};
            write_csv(fs::path(s.out_dir) / "noise.csv", nt, s.precision);
            traj = integrate_gle(s.particle, u, noise, init, s.profile, s.dt, s.n_steps);
        }
    }
    write_trajectory(fs::path(s.out_dir) / "trajectory.csv", traj, s.precision);
    return 0;
}

int run_fdt(const Scenario& s) {
    const DiscreteBath bath = scenario_bath(s);
    need(s.has_temperature, "temperature is required");
    need(s.has_fdt, "an fdt section is required");
    const CounterRng root = scenario_stream(s);
    const double dt = s.fdt_horizon / static_cast<double>(s.fdt_grid - 1);
    const FdtReport report =
        fdt_check(bath, s.k_B * s.temperature, s.fdt_realizations, s.t0, dt, s.fdt_grid,
                  s.profile, root.seed(), s.fdt_tolerance);

    CsvTable mt;
    mt.header = {"t", "mean_R", "se_R"};
    mt.columns = {report.times, report.mean_R, report.se_R};
    write_csv(fs::path(s.out_dir) / "fdt_mean.csv", mt, s.precision);

    CsvTable ct;
    ct.header = {"t", "s", "cov", "target", "cov_se"};
    ct.columns.assign(5, {});
    const std::size_t G = report.times.size();
    for (std::size_t g = 0; g < G; ++g)
        for (std::size_t h = 0; h < G; ++h) {
            ct.columns[0].push_back(report.times[g]);
            ct.columns[1].push_back(report.times[h]);
            ct.columns[2].push_back(report.cov[g * G + h]);
            ct.columns[3].push_back(report.target[g * G + h]);
            ct.columns[4].push_back(report.cov_se[g * G + h]);
        }
    write_csv(fs::path(s.out_dir) / "fdt_cov.csv", ct, s.precision);

    write_summary(
        fs::path(s.out_dir) / "summary.csv",
        {{"noise_mean_max_sigmas", report.max_mean_sigmas, 3.0,
          report.mean_pass ? 1.0 : 0.0},
         {"noise_cov_max_deviation", report.max_cov_dev, report.tolerance,
          report.cov_pass ? 1.0 : 0.0}},
        s.precision);
    return report.mean_pass && report.cov_pass ? 0 : 1;
}

int run_compare(const Scenario& s) {
    need(s.has_compare, "a compare section is required");
    const Trajectory a = read_trajectory(resolve(s, s.compare_first));
    const Trajectory b = read_trajectory(resolve(s, s.compare_second));
    const TrajectoryDistance d = compare_trajectories(a, b);

    const double nan = std::nan("");
    const bool gated = s.has_compare_gate;
    const bool pass = !gated || d.rms <= s.compare_gate;
    write_summary(fs::path(s.out_dir) / "summary.csv",
                  {{"rms_position_difference", d.rms, gated ? s.compare_gate : nan,
                    gated ? (pass ? 1.0 : 0.0) : nan},
                   {"max_position_difference", d.max_abs, nan, nan}},
                  s.precision);
    return pass ? 0 : 1;
}

int run_influence(const Scenario& s) {
    need(s.has_influence, "an influence section is required");
    need(s.has_temperature, "temperature is required");
    const DiscreteBath bath = scenario_bath(s);

    const CsvTable pt = read_csv(resolve(s, s.influence_path_file));
    const auto& t = pt.column("t");
    const auto& X = pt.column("X");
    const auto& xi = pt.column("xi");
    if (t.size() < 2) throw config_error("influence path: need at least two rows");
    PathPair path;
    path.t0 = t[0];
    path.dt = t[1] - t[0];
    path.X = X;
    path.xi = xi;
    for (std::size_t k = 1; k < t.size(); ++k) {
        const double expected = t[0] + static_cast<double>(k) * path.dt;
        if (std::abs(t[k] - expected) > 1e-9 * (1.0 + std::abs(expected)))
            throw config_error("influence path: time grid must be uniform");
    }

    const Kernel u = kernel_u(bath, path.dt, path.size());
    const Kernel a =
        kernel_alpha(bath, path.dt, path.size(), s.k_B * s.temperature, s.hbar);
    const InfluencePhase phase = influence_phase(u, a, path, s.profile);

    CsvTable out;
    out.header = {"re_dS", "im_dS", "abs_F"};
    out.columns = {{phase.real_part},
                   {phase.imag_part},
                   {std::exp(-phase.imag_part / s.hbar)}};
    write_csv(fs::path(s.out_dir) / "influence.csv", out, s.precision);
    return 0;
}

int run_ensemble_cmd(const Scenario& s) {
    need(s.has_ensemble, "an ensemble section is required");
    need(!s.dynamics.empty(), "ensemble.dynamics is required");
    need(s.realizations >= 1, "ensemble.realizations is required");
    need(s.has_integrator, "an integrator section is required");
    need(s.has_temperature, "temperature is required");
    const CounterRng root = scenario_stream(s);

    EnsembleSpec spec;
    spec.particle = s.particle;
    spec.temperature = s.k_B * s.temperature;
    spec.init = s.init;
    spec.x_width = s.x_width;
    spec.v_width = s.v_width;
    spec.profile = s.profile;
    spec.t0 = s.t0;
    spec.dt = s.dt;
    spec.n_steps = s.n_steps;
    spec.collect_noise_moments = s.noise_moments;
    spec.noise_grid_max = s.noise_grid;
    spec.drift_checks = s.drift_checks;
    spec.rate_tolerance = s.rate_tolerance;
    if (s.dynamics == "langevin") {
        spec.kind = SimKind::LangevinWhite;
        need(s.has_langevin, "a langevin section is required");
        spec.eta = s.langevin_eta;
    } else {
        spec.kind = s.dynamics == "full" ? SimKind::Full : SimKind::Gle;
        spec.bath = scenario_bath(s);
    }

    const EnsembleReport report = run_ensemble(spec, s.realizations, root.seed());

    CsvTable mt;
    mt.header = {"t", "mean_x", "se_x", "mean_v", "var_v", "msd"};
    std::vector<double> times(report.mean_x.size());
    for (std::size_t k = 0; k < times.size(); ++k)
        times[k] = report.t0 + static_cast<double>(k) * report.dt;
    mt.columns = {std::move(times), report.mean_x, report.se_x,
                  report.mean_v, report.var_v, report.msd};
    write_csv(fs::path(s.out_dir) / "ensemble_mean.csv", mt, s.precision);

    if (!report.noise_times.empty()) {
        CsvTable nm;
        nm.header = {"t", "mean_R", "se_R"};
        nm.columns = {report.noise_times, report.noise_mean, report.noise_mean_se};
        write_csv(fs::path(s.out_dir) / "noise_mean.csv", nm, s.precision);

        CsvTable nc;
        nc.header = {"t", "s", "cov", "target"};
        nc.columns.assign(4, {});
        const std::size_t G = report.noise_times.size();
        for (std::size_t g = 0; g < G; ++g)
            for (std::size_t h = 0; h < G; ++h) {
                nc.columns[0].push_back(report.noise_times[g]);
                nc.columns[1].push_back(report.noise_times[h]);
                nc.columns[2].push_back(report.noise_cov[g * G + h]);
                nc.columns[3].push_back(report.noise_target[g * G + h]);
            }
        write_csv(fs::path(s.out_dir) / "noise_cov.csv", nc, s.precision);
    }

    const double nan = std::nan("");
    std::vector<SummaryRow> rows;
    rows.push_back({"realizations", static_cast<double>(report.realizations), nan, nan});
    rows.push_back({"standard_errors_defined", report.se_defined ? 1.0 : 0.0, nan, nan});
    bool all_pass = true;
    for (const auto& g : report.gates) {
        rows.push_back({g.name, g.value, g.tolerance, g.pass ? 1.0 : 0.0});
        all_pass = all_pass && g.pass;
    }
    write_summary(fs::path(s.out_dir) / "summary.csv", rows, s.precision);
    return all_pass ? 0 : 1;
}

} // namespace

int run_scenario(const Scenario& scenario, const std::string& subcommand) {
    bool known = false;
    for (const auto& sub : scenario_subcommands) known = known || sub == subcommand;
    if (!known) throw config_error("scenario: unknown subcommand '" + subcommand + "'");

    std::filesystem::create_directories(scenario.out_dir);

    if (subcommand == "kernel") return run_kernel(scenario);
    if (subcommand == "sample") return run_sample(scenario);
    if (subcommand == "simulate-full" || subcommand == "simulate-gle" ||
        subcommand == "simulate-langevin")
        return run_simulate(scenario, subcommand);
    if (subcommand == "fdt") return run_fdt(scenario);
    if (subcommand == "compare") return run_compare(scenario);
    if (subcommand == "influence") return run_influence(scenario);
    return run_ensemble_cmd(scenario);
}

} // namespace oscbath
