#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "oscbath/csv.hpp"
#include "oscbath/errors.hpp"
#include "oscbath/scenario.hpp"

using namespace oscbath;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    f << text;
}

bool mentions(const std::vector<std::string>& violations, const std::string& needle) {
    for (const auto& v : violations)
        if (v.find(needle) != std::string::npos) return true;
    return false;
}

} // namespace

TEST_CASE("minimal scenario parses with the documented defaults") {
    const Scenario s = parse_scenario(R"({
        "particle": {"mass": 1.0, "potential": "free"},
        "bath": {"type": "white-noise", "eta": 1.0, "osc_mass": 1.0,
                 "cutoff": 10.0, "n_oscillators": 8}
    })");
    CHECK(s.k_B == 1.0);
    CHECK(s.hbar == 1.0);
    CHECK(s.precision == 17);
    CHECK(s.has_particle);
    CHECK(s.has_bath);
    CHECK(!s.has_temperature);
    const DiscreteBath bath = scenario_bath(s);
    CHECK(bath.size() == 8);
}

TEST_CASE("domain violations name the offending key") {
    try {
        parse_scenario(R"({"temperature": -1})");
        FAIL("expected a scenario error");
    } catch (const scenario_error& e) {
        CHECK(mentions(e.violations, "temperature"));
        CHECK(std::string(e.what()).find("temperature") != std::string::npos);
    }
}

TEST_CASE("unknown keys are rejected by name") {
    try {
        parse_scenario(R"({"foo": 1})");
        FAIL("expected a scenario error");
    } catch (const scenario_error& e) {
        CHECK(mentions(e.violations, "foo"));
    }
}

TEST_CASE("all violations are reported, not just the first") {
    try {
        parse_scenario(R"({
            "temperature": -2,
            "bogus_section": {},
            "integrator": {"t0": 0.0, "dt": -0.5, "n_steps": 10, "mystery": true}
        })");
        FAIL("expected a scenario error");
    } catch (const scenario_error& e) {
        CHECK(e.violations.size() >= 3);
        CHECK(mentions(e.violations, "temperature"));
        CHECK(mentions(e.violations, "bogus_section"));
        CHECK(mentions(e.violations, "integrator.dt"));
        CHECK(mentions(e.violations, "integrator.mystery"));
    }
}

TEST_CASE("syntax errors carry the line number") {
    try {
        parse_scenario("{\n  \"particle\": {\n  broken\n}");
        FAIL("expected a config error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("type and domain checks across sections") {
    auto violations = [](const std::string& text) {
        try {
            parse_scenario(text);
        } catch (const scenario_error& e) {
            return e.violations;
        }
        return std::vector<std::string>{};
    };
    CHECK(mentions(violations(R"({"particle": {"mass": "heavy", "potential": "free"}})"),
                   "particle.mass"));
    CHECK(mentions(violations(R"({"particle": {"mass": -1, "potential": "free"}})"),
                   "particle.mass"));
    CHECK(mentions(violations(R"({"bath": {"type": "purple"}})"), "bath.type"));
    CHECK(mentions(violations(R"({"profile": {"type": "warp", "v": 1}})"),
                   "profile.type"));
    CHECK(mentions(violations(R"({"integrator": {"dt": 0.1}})"), "integrator.n_steps"));
    CHECK(mentions(violations(R"({"ensemble": {"realizations": 0}})"),
                   "ensemble.realizations"));
    CHECK(mentions(violations(R"({"ensemble": {"base_seed": -4}})"),
                   "ensemble.base_seed"));
    CHECK(mentions(violations(R"({"output": {"precision": 40}})"), "output.precision"));
    CHECK(mentions(violations(R"({"fdt": {"horizon": -1}})"), "fdt.horizon"));
    CHECK(mentions(violations(R"({"langevin": {}})"), "langevin.eta"));
    CHECK(mentions(violations(R"({"bath": {"type": "explicit",
        "frequencies": [1, -2], "masses": [1, 1]}})"), "bath"));
}

TEST_CASE("kernel subcommand writes the expected table") {
    const fs::path dir = fresh_dir("oscbath_test_kernel");
    Scenario s = parse_scenario(R"({
        "bath": {"type": "explicit", "frequencies": [2.0], "masses": [1.0]},
        "integrator": {"dt": 0.1, "n_steps": 4}
    })");
    s.out_dir = (dir / "out").string();
    CHECK(run_scenario(s, "kernel") == 0);

    const CsvTable table = read_csv(dir / "out" / "kernel_u.csv");
    REQUIRE(table.header.size() == 2);
    CHECK(table.header[0] == "tau");
    CHECK(table.header[1] == "u");
    REQUIRE(table.rows() == 5);
    CHECK(table.column("tau")[0] == 0.0);
    CHECK(table.column("u")[0] == 4.0); // m w^2 at zero lag
    CHECK(table.column("u")[1] == doctest::Approx(4.0 * std::cos(0.2)).epsilon(1e-14));

    // quantum kernel only on request
    CHECK(!fs::exists(dir / "out" / "kernel_alpha.csv"));
    Scenario sq = parse_scenario(R"({
        "bath": {"type": "explicit", "frequencies": [2.0], "masses": [1.0]},
        "integrator": {"dt": 0.1, "n_steps": 4},
        "kernel": {"quantum": true},
        "temperature": 1.0
    })");
    sq.out_dir = (dir / "out_q").string();
    CHECK(run_scenario(sq, "kernel") == 0);
    CHECK(fs::exists(dir / "out_q" / "kernel_alpha.csv"));
}

TEST_CASE("dispatcher reports missing sections") {
    const Scenario bare = parse_scenario(R"({
        "bath": {"type": "explicit", "frequencies": [1.0], "masses": [1.0]}
    })");
    CHECK_THROWS_AS(run_scenario(bare, "simulate-full"), config_error);
    CHECK_THROWS_AS(run_scenario(bare, "fdt"), config_error);
    CHECK_THROWS_AS(run_scenario(bare, "influence"), config_error);
    CHECK_THROWS_AS(run_scenario(bare, "compare"), config_error);
    CHECK_THROWS_AS(run_scenario(bare, "ensemble"), config_error);
    CHECK_THROWS_AS(run_scenario(bare, "no-such-subcommand"), config_error);

    // integrator present but no seed
    const Scenario no_seed = parse_scenario(R"({
        "bath": {"type": "explicit", "frequencies": [1.0], "masses": [1.0]},
        "temperature": 1.0,
        "integrator": {"dt": 0.01, "n_steps": 10}
    })");
    CHECK_THROWS_AS(run_scenario(no_seed, "simulate-full"), config_error);
}

TEST_CASE("load_scenario resolves the base directory") {
    const fs::path dir = fresh_dir("oscbath_test_load");
    write_file(dir / "scn.json", R"({"temperature": 2.5})");
    const Scenario s = load_scenario(dir / "scn.json");
    CHECK(s.has_temperature);
    CHECK(s.temperature == 2.5);
    CHECK(s.base_dir == dir);
    CHECK_THROWS_AS(load_scenario(dir / "missing.json"), config_error);
}

TEST_CASE("compare subcommand measures trajectory distance through files") {
    const fs::path dir = fresh_dir("oscbath_test_compare");
    CsvTable a;
    a.header = {"t", "x", "v"};
    a.columns = {{0.0, 0.1, 0.2}, {0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}};
    CsvTable b = a;
    for (double& x : b.columns[1]) x += 1e-4;
    write_csv(dir / "a.csv", a);
    write_csv(dir / "b.csv", b);

    Scenario pass = parse_scenario(R"({
        "compare": {"first": "a.csv", "second": "b.csv", "rms_gate": 1e-3}
    })");
    pass.base_dir = dir;
    pass.out_dir = (dir / "out_pass").string();
    CHECK(run_scenario(pass, "compare") == 0);

    Scenario fail = parse_scenario(R"({
        "compare": {"first": "a.csv", "second": "b.csv", "rms_gate": 1e-6}
    })");
    fail.base_dir = dir;
    fail.out_dir = (dir / "out_fail").string();
    CHECK(run_scenario(fail, "compare") == 1);

    // summary carries metric, value, tolerance, pass columns
    std::ifstream f(dir / "out_fail" / "summary.csv");
    std::string header, line;
    std::getline(f, header);
    CHECK(header == "metric,value,tolerance,pass");
    std::getline(f, line);
    CHECK(line.find("rms_position_difference") == 0);
    CHECK(line.substr(line.size() - 2) == ",0");
}

TEST_CASE("csv round trip is bit exact") {
    const fs::path dir = fresh_dir("oscbath_test_csv");
    CsvTable t;
    t.header = {"a", "b"};
    t.columns = {{1.0 / 3.0, 1e-300, -0.0, 6.02214076e23},
                 {2.0 / 7.0, 1.7976931348623157e308, 5e-324, -1.0}};
    write_csv(dir / "t.csv", t);
    const CsvTable r = read_csv(dir / "t.csv");
    REQUIRE(r.rows() == 4);
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(r.columns[c][i] == t.columns[c][i]);

    // rereading the rewritten file gives identical bytes
    write_csv(dir / "t2.csv", r);
    std::ifstream f1(dir / "t.csv"), f2(dir / "t2.csv");
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
}

TEST_CASE("csv reader reports malformed rows with line numbers") {
    const fs::path dir = fresh_dir("oscbath_test_csv_bad");
    write_file(dir / "short.csv", "a,b\n1.0\n");
    try {
        read_csv(dir / "short.csv");
        FAIL("expected a config error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    write_file(dir / "text.csv", "a,b\n1.0,hello\n");
    CHECK_THROWS_AS(read_csv(dir / "text.csv"), config_error);
    write_file(dir / "empty.csv", "");
    CHECK_THROWS_AS(read_csv(dir / "empty.csv"), config_error);
    CHECK_THROWS_AS(read_csv(dir / "absent.csv"), config_error);

    write_file(dir / "ok.csv", "a,b\r\n1.0,2.0\r\n");
    const CsvTable t = read_csv(dir / "ok.csv"); // tolerate CRLF
    CHECK(t.columns[1][0] == 2.0);
    CHECK_THROWS_AS(t.column("c"), config_error);
}

TEST_CASE("simulate-gle scenario writes trajectory and noise artifacts") {
    const fs::path dir = fresh_dir("oscbath_test_gle_cmd");
    Scenario s = parse_scenario(R"({
        "particle": {"mass": 1.0, "potential": "free", "x0": 0.0, "v0": 0.0},
        "bath": {"type": "white-noise", "eta": 1.0, "osc_mass": 1.0,
                 "cutoff": 10.0, "n_oscillators": 32},
        "temperature": 1.0,
        "integrator": {"t0": 0.0, "dt": 0.01, "n_steps": 50},
        "ensemble": {"base_seed": 7}
    })");
    s.out_dir = (dir / "out").string();
    CHECK(run_scenario(s, "simulate-gle") == 0);
    const CsvTable traj = read_csv(dir / "out" / "trajectory.csv");
    CHECK(traj.header == std::vector<std::string>{"t", "x", "v"});
    CHECK(traj.rows() == 51);
    const CsvTable noise = read_csv(dir / "out" / "noise.csv");
    CHECK(noise.header == std::vector<std::string>{"t", "R"});
    CHECK(noise.rows() == 51);

    // same seed, same bytes: the documented idempotence contract
    Scenario again = s;
    again.out_dir = (dir / "out2").string();
    CHECK(run_scenario(again, "simulate-gle") == 0);
    std::ifstream f1(dir / "out" / "trajectory.csv"), f2(dir / "out2" / "trajectory.csv");
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
}
