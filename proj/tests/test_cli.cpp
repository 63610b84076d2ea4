#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lucas/config.hpp"
#include "lucas/io.hpp"

using namespace lucas;
namespace fs = std::filesystem;

namespace {

// A complete, valid configuration (reference set 1 on its balanced path).
std::string base_config(const std::string& extra = "") {
    std::string s = R"({
        "beta": 0.5, "sigma": 2.0, "rho": 0.04, "delta": 0.05,
        "gamma": 0.1, "pi": 0.0, "theta": 0.0,
        "k0": 1.0, "h0": 1.1111111111111112)";
    if (!extra.empty()) s += ",\n" + extra;
    s += "\n}";
    return s;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
    REQUIRE(out.good());
}

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

// Scratch directory per test case, removed on destruction.
struct TempDir {
    fs::path path;
    TempDir() {
        std::string tmpl = (fs::temp_directory_path() / "luz_cli_XXXXXX").string();
        REQUIRE(mkdtemp(tmpl.data()) != nullptr);
        path = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Runs the command-line binary with the given arguments, from inside the
// scratch directory (relative output paths resolve against the working
// directory, as usual for command-line tools).
RunResult run_cli(const TempDir& dir, const std::string& args) {
    const char* cli = std::getenv("LUZ_CLI_PATH");
    REQUIRE_MESSAGE(cli != nullptr, "LUZ_CLI_PATH must point at the CLI binary");
    const fs::path out_file = dir.path / "stdout.txt";
    const fs::path err_file = dir.path / "stderr.txt";
    const std::string cmd = "cd \"" + dir.path.string() + "\" && \"" + cli + "\" " + args +
                            " > \"" + out_file.string() + "\" 2> \"" + err_file.string() +
                            "\"";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration parsing
// ---------------------------------------------------------------------------

TEST_CASE("a minimal configuration parses with documented defaults") {
    const RunConfig cfg = parse_config(base_config());
    CHECK(cfg.params.beta == 0.5);
    CHECK(cfg.params.sigma == 2.0);
    CHECK(cfg.endowment.k0 == 1.0);
    CHECK(cfg.endowment.h0 == doctest::Approx(10.0 / 9.0).epsilon(1e-15));
    CHECK(cfg.horizon == 200.0);
    CHECK(cfg.output_step == 0.1);
    CHECK(cfg.compare_horizon == 50.0);
    CHECK(cfg.output_dir == ".");
    CHECK(cfg.sweep.empty());
    CHECK_FALSE(cfg.force_u0.has_value());
}

TEST_CASE("optional grid and tolerance keys are honored") {
    const RunConfig cfg = parse_config(base_config(
        R"("horizon": 80.0, "output_step": 0.5, "compare_horizon": 0.0,
           "output_dir": "out/run",
           "tolerances": {"ode_rel_tol": 1e-9, "max_steps": 50000})"));
    CHECK(cfg.horizon == 80.0);
    CHECK(cfg.output_step == 0.5);
    CHECK(cfg.compare_horizon == 0.0);
    CHECK(cfg.output_dir == "out/run");
    CHECK(cfg.tolerances.ode_rel_tol == 1e-9);
    CHECK(cfg.tolerances.max_steps == 50000);
}

TEST_CASE("the parser is strict about the schema") {
    CHECK_THROWS_AS(parse_config("not json at all"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);

    // Unknown keys, at top level and inside the tolerance block.
    CHECK_THROWS_WITH_AS(parse_config(base_config(R"("betaa": 0.5)")),
                         doctest::Contains("unknown key \"betaa\""), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(base_config(R"("tolerances": {"od_rel_tol": 1e-8})")),
                         doctest::Contains("unknown tolerance key"), ConfigError);

    // Each required key must be present and numeric.
    for (const char* key : {"beta", "sigma", "rho", "delta", "gamma", "pi", "theta",
                            "k0", "h0"}) {
        std::string text = base_config();
        const auto pos = text.find(std::string("\"") + key + "\"");
        REQUIRE(pos != std::string::npos);
        text.replace(pos + 1, std::string(key).size(), std::string("x") + key);
        CHECK_THROWS_AS(parse_config(text), ConfigError);
    }
    CHECK_THROWS_WITH_AS(parse_config(base_config(R"("horizon": "long")")),
                         doctest::Contains("must be a number"), ConfigError);

    // Grid and tolerance positivity.
    CHECK_THROWS_AS(parse_config(base_config(R"("horizon": 0.0)")), ConfigError);
    CHECK_THROWS_AS(parse_config(base_config(R"("output_step": -0.1)")), ConfigError);
    CHECK_THROWS_AS(parse_config(base_config(R"("compare_horizon": -1.0)")), ConfigError);
    CHECK_THROWS_AS(parse_config(base_config(R"("tolerances": {"quad_tol": 0.0})")),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(base_config(R"("tolerances": {"max_steps": 2.5})")),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(base_config(R"("output_dir": "")")), ConfigError);
}

TEST_CASE("sweep blocks name real parameters and carry finite values") {
    const RunConfig cfg = parse_config(
        base_config(R"("sweep": {"theta": [0.0, 0.05, 0.1], "k0": [1.0, 2.0]})"));
    REQUIRE(cfg.sweep.size() == 2);
    CHECK(cfg.sweep.begin()->first == "k0");  // map order: deterministic
    CHECK(cfg.sweep.at("theta") == std::vector<double>{0.0, 0.05, 0.1});

    CHECK_THROWS_WITH_AS(parse_config(base_config(R"("sweep": {"eta": [1.0]})")),
                         doctest::Contains("cannot sweep over unknown parameter"),
                         ConfigError);
    CHECK_THROWS_AS(parse_config(base_config(R"("sweep": {"theta": []})")), ConfigError);
    CHECK_THROWS_AS(parse_config(base_config(R"("sweep": {"theta": ["a"]})")), ConfigError);
    CHECK_THROWS_AS(parse_config(base_config(R"("sweep": [1, 2])")), ConfigError);
}

TEST_CASE("loading a missing file reports a configuration error") {
    CHECK_THROWS_WITH_AS(load_config("/nonexistent/path/cfg.json"),
                         doctest::Contains("cannot open"), ConfigError);
}

// ---------------------------------------------------------------------------
// Number formatting
// ---------------------------------------------------------------------------

TEST_CASE("numbers print with twelve significant digits and round-trip") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(0.9) == "0.9");
    CHECK(format_number(10.0 / 3.0) == "3.33333333333");
    CHECK(format_number(110.80332409972299) == "110.8033241");
    CHECK(format_number(-0.0138) == "-0.0138");

    for (double v : {3.141592653589793, 1.0 / 7.0, 1e-7, 123456.789012345,
                     2.2222222222222222e+1, 6.455357647847e+0}) {
        const double back = std::strtod(format_number(v).c_str(), nullptr);
        CHECK(std::abs(back - v) <= 1e-11 * std::abs(v));
    }
}

// ---------------------------------------------------------------------------
// End-to-end runs of the command-line driver
// ---------------------------------------------------------------------------

TEST_CASE("solve writes a trajectory table and a calibration summary") {
    TempDir dir;
    spit(dir.path / "cfg.json",
         base_config(R"("horizon": 100.0, "output_step": 0.5, "output_dir": "out")"));
    const RunResult r =
        run_cli(dir, "solve --config \"" + (dir.path / "cfg.json").string() + "\"");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "calibrated: u0 = 0.9"));

    const std::string csv = slurp(dir.path / "out" / "trajectory.csv");
    CHECK(first_line(csv) ==
          "t,k,h,c,u_form1,u_form2,z,lambda,mu,F,B,res_k,res_h,res_c,res_u");
    const std::string row0 = csv.substr(csv.find('\n') + 1);
    CHECK(contains(first_line(row0),
                   "0,1,1.11111111111,0.095,0.9,0.9,1,110.8033241,110.8033241,0,0,"));

    const std::string sol = slurp(dir.path / "out" / "solution.json");
    CHECK(contains(sol, "\"u0\": 0.9"));
    CHECK(contains(sol, "\"mode\": \"solved\""));
    CHECK(contains(sol, "\"F_star\": 10.5263157"));
    CHECK(contains(sol, "\"welfare\""));
}

TEST_CASE("the --out flag overrides the configured output directory") {
    TempDir dir;
    spit(dir.path / "cfg.json", base_config(R"("output_dir": "ignored")"));
    const RunResult r = run_cli(dir, "solve --config \"" +
                                         (dir.path / "cfg.json").string() + "\" --out \"" +
                                         (dir.path / "elsewhere").string() + "\"");
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir.path / "elsewhere" / "trajectory.csv"));
    CHECK_FALSE(fs::exists(dir.path / "ignored"));
}

TEST_CASE("verify reports a passing suite on the balanced path") {
    TempDir dir;
    spit(dir.path / "cfg.json",
         base_config(R"("horizon": 100.0, "output_step": 0.5, "compare_horizon": 20.0,
                        "output_dir": "out")"));
    const RunResult r =
        run_cli(dir, "verify --config \"" + (dir.path / "cfg.json").string() + "\"");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "[pass] equivalence_u_forms"));
    CHECK(contains(r.out, "[pass] closed_vs_simulated"));
    const std::string report = slurp(dir.path / "out" / "verification.json");
    CHECK(contains(report, "\"all_passed\": true"));
}

TEST_CASE("verify with a forced inadmissible labor share fails but still reports") {
    TempDir dir;
    spit(dir.path / "cfg.json",
         base_config(R"("horizon": 100.0, "output_step": 0.5, "compare_horizon": 20.0,
                        "output_dir": "out")"));
    const RunResult r = run_cli(dir, "verify --config \"" +
                                         (dir.path / "cfg.json").string() +
                                         "\" --force-u0 1.5");
    CHECK(r.exit_code == 3);
    CHECK(contains(r.out, "forcing u0 = 1.5"));
    CHECK(contains(r.out, "[FAIL]"));
    const std::string report = slurp(dir.path / "out" / "verification.json");
    CHECK(contains(report, "\"all_passed\": false"));
    CHECK(contains(report, "\"mode\": \"forced\""));
}

TEST_CASE("compare writes the four labor-share series") {
    TempDir dir;
    spit(dir.path / "cfg.json",
         base_config(R"("compare_horizon": 20.0, "output_step": 0.5, "output_dir": "out")"));
    const RunResult r =
        run_cli(dir, "compare --config \"" + (dir.path / "cfg.json").string() + "\"");
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(dir.path / "out" / "compare.csv");
    CHECK(first_line(csv) == "t,u_form1,u_form2,u_sim,u_ode,gap_form2,gap_sim,gap_ode");
    const std::string row0 = csv.substr(csv.find('\n') + 1);
    CHECK(contains(first_line(row0), "0,0.9,0.9,0.9,0.9,"));
}

TEST_CASE("a zero comparison horizon yields just the header") {
    TempDir dir;
    spit(dir.path / "cfg.json",
         base_config(R"("compare_horizon": 0.0, "output_dir": "out")"));
    const RunResult r =
        run_cli(dir, "compare --config \"" + (dir.path / "cfg.json").string() + "\"");
    CHECK(r.exit_code == 0);
    CHECK(slurp(dir.path / "out" / "compare.csv") ==
          "t,u_form1,u_form2,u_sim,u_ode,gap_form2,gap_sim,gap_ode\n");
}

TEST_CASE("sweep enumerates points in deterministic order with one row each") {
    TempDir dir;
    spit(dir.path / "cfg.json",
         base_config(R"("horizon": 100.0, "output_step": 0.5, "output_dir": "out",
                        "sweep": {"theta": [0.0, 0.05, 0.1]})"));
    const RunResult r =
        run_cli(dir, "sweep --config \"" + (dir.path / "cfg.json").string() + "\"");
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(dir.path / "out" / "sweep.csv");
    std::istringstream lines(csv);
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "theta,status,u0,u_star,F_star,B_star,jump_residual,admissible");
    REQUIRE(std::getline(lines, line));
    CHECK(contains(line, "0,ok,0.9,0.9,10.5263157895,22.2222222222,"));
    CHECK(contains(line, ",yes"));
    REQUIRE(std::getline(lines, line));
    CHECK(contains(line, "0.05,ok,"));
    REQUIRE(std::getline(lines, line));
    CHECK(contains(line, "0.1,ok,"));
    CHECK_FALSE(std::getline(lines, line));
}

TEST_CASE("sweep requires a sweep block") {
    TempDir dir;
    spit(dir.path / "cfg.json", base_config(R"("output_dir": "out")"));
    const RunResult r =
        run_cli(dir, "sweep --config \"" + (dir.path / "cfg.json").string() + "\"");
    CHECK(r.exit_code == 1);
    CHECK(contains(r.out, "sweep"));
}

TEST_CASE("parameter bound violations exit with the invalid-input code") {
    TempDir dir;
    std::string text = base_config(R"("output_dir": "out")");
    const auto pos = text.find("\"beta\": 0.5");
    text.replace(pos, 11, "\"beta\": 1.5");
    spit(dir.path / "cfg.json", text);
    const RunResult r =
        run_cli(dir, "solve --config \"" + (dir.path / "cfg.json").string() + "\"");
    CHECK(r.exit_code == 1);
    CHECK(contains(r.out, "invalid parameters"));
}

TEST_CASE("a bad endowment exits with the invalid-input code") {
    TempDir dir;
    std::string text = base_config(R"("output_dir": "out")");
    const auto pos = text.find("\"h0\": 1.1111111111111112");
    text.replace(pos, 24, "\"h0\": -1.0");
    spit(dir.path / "cfg.json", text);
    const RunResult r =
        run_cli(dir, "solve --config \"" + (dir.path / "cfg.json").string() + "\"");
    CHECK(r.exit_code == 1);
    CHECK(contains(r.out, "invalid endowment"));
}

TEST_CASE("an endowment with no admissible jump exits with the solver-failure code") {
    TempDir dir;
    std::string text = base_config(R"("output_dir": "out")");
    const auto pos = text.find("\"h0\": 1.1111111111111112");
    text.replace(pos, 24, "\"h0\": 2.0");
    spit(dir.path / "cfg.json", text);
    const RunResult r =
        run_cli(dir, "solve --config \"" + (dir.path / "cfg.json").string() + "\"");
    CHECK(r.exit_code == 2);
    CHECK(contains(r.out, "calibration failed"));
}

TEST_CASE("configuration problems exit with the I/O code") {
    TempDir dir;
    const RunResult missing =
        run_cli(dir, "solve --config \"" + (dir.path / "nope.json").string() + "\"");
    CHECK(missing.exit_code == 4);
    CHECK(contains(missing.err, "configuration error"));

    spit(dir.path / "bad.json", base_config(R"("mystery_key": 1.0)"));
    const RunResult unknown =
        run_cli(dir, "solve --config \"" + (dir.path / "bad.json").string() + "\"");
    CHECK(unknown.exit_code == 4);
    CHECK(contains(unknown.err, "unknown key"));
}

TEST_CASE("an unwritable output directory exits with the I/O code") {
    TempDir dir;
    spit(dir.path / "cfg.json", base_config(R"("output_dir": "/proc/impossible/out")"));
    const RunResult r =
        run_cli(dir, "solve --config \"" + (dir.path / "cfg.json").string() + "\"");
    CHECK(r.exit_code == 4);
}

TEST_CASE("usage errors are reported by the argument parser") {
    TempDir dir;
    const RunResult no_sub = run_cli(dir, "");
    CHECK(no_sub.exit_code != 0);
    const RunResult help = run_cli(dir, "--help");
    CHECK(help.exit_code == 0);
    CHECK(contains(help.out, "solve"));
    CHECK(contains(help.out, "verify"));
    CHECK(contains(help.out, "compare"));
    CHECK(contains(help.out, "sweep"));
}
