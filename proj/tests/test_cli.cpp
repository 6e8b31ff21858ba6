#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "equijac/config.hpp"
#include "equijac/errors.hpp"
#include "equijac/runner.hpp"

using namespace equijac;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(EQUIJAC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("config round-trips through serialization") {
    RunConfig c;
    c.experiment = "equiconv";
    c.alpha = 0.62;
    c.beta = -0.117;
    c.b_coeffs = {0.2, -0.05};
    c.basis_size = 96;
    c.weights = "cesaro";
    c.theta = 1.5;
    c.N_list = {10, 20, 30};
    c.function = "bump 0.7 0.3";
    const std::string text = serialize_config(c);
    const RunConfig back = parse_config_text(text);
    CHECK(serialize_config(back) == text);
    CHECK(back.alpha == c.alpha);
    CHECK(back.b_coeffs == c.b_coeffs);
    CHECK(back.N_list == c.N_list);
}

TEST_CASE("config parsing errors name the offending field") {
    CHECK_THROWS_AS(parse_config_text("alpha = fish\n"), ConfigError);
    try {
        parse_config_text("alpha = fish\n");
    } catch (const ConfigError& e) {
        CHECK(e.field == "alpha");
    }
    CHECK_THROWS_AS(parse_config_text("nonsense_key = 1\n"), ConfigError);
    // range list form
    const RunConfig c = parse_config_text("N_list = 10:30:10\n");
    CHECK(c.N_list == std::vector<int>{10, 20, 30});
}

TEST_CASE("validation catches out-of-domain experiment parameters") {
    RunConfig c;
    c.experiment = "kernel-diff";
    c.x_list = {2.0};  // outside (0, pi/2)
    c.N_list = {10};
    try {
        validate_config(c);
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(e.field == "x_list");
    }
    c.x_list = {0.5};
    c.weights = "hamming";
    try {
        validate_config(c);
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(e.field == "weights");
    }
}

TEST_CASE("function descriptors parse") {
    CHECK(parse_function_descriptor("indicator 0.3 0.8").describe() ==
          "indicator(0.3,0.8)");
    CHECK(parse_function_descriptor("zero")(0.7) == 0.0);
    CHECK_THROWS_AS(parse_function_descriptor("indicator 0.3"), ConfigError);
    CHECK_THROWS_AS(parse_function_descriptor("wavelet 1 2"), ConfigError);
}

TEST_CASE("cli spectrum run is deterministic and correct") {
    const fs::path dir = fs::path("cli_test_out");
    fs::remove_all(dir);
    const fs::path cfg = dir / "spectrum.cfg";
    fs::create_directories(dir);
    {
        std::ofstream out(cfg);
        out << "experiment = spectrum\nalpha = 0.5\nbeta = 0.5\n"
            << "basis_size = 64\nn_max = 12\noutput_dir = " << (dir / "run1").string()
            << "\n";
    }
    CHECK(run_cli("run " + cfg.string()) == 0);
    const std::string csv1 = slurp(dir / "run1" / "spectrum.csv");
    CHECK(csv1.rfind("# experiment = spectrum", 0) == 0);

    // the eigenvalues must match 4n(n+2)
    std::istringstream rows(csv1);
    std::string line;
    int checked = 0;
    while (std::getline(rows, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'n') continue;
        std::istringstream cells(line);
        std::string cell;
        std::getline(cells, cell, ',');
        const int n = std::stoi(cell);
        std::getline(cells, cell, ',');
        const double mu = std::stod(cell);
        const double expect = 4.0 * n * (n + 2);
        CHECK(std::fabs(mu - expect) <= 1e-8 * std::max(expect, 1.0));
        ++checked;
    }
    CHECK(checked == 13);

    // byte-identical on rerun
    {
        std::ofstream out(cfg);
        out << "experiment = spectrum\nalpha = 0.5\nbeta = 0.5\n"
            << "basis_size = 64\nn_max = 12\noutput_dir = " << (dir / "run2").string()
            << "\n";
    }
    CHECK(run_cli("run " + cfg.string()) == 0);
    const std::string csv2 = slurp(dir / "run2" / "spectrum.csv");
    const auto strip_dir = [](std::string s) {
        const auto pos = s.find("output_dir");
        const auto end = s.find('\n', pos);
        return s.substr(0, pos) + s.substr(end);
    };
    CHECK(strip_dir(csv1) == strip_dir(csv2));
    const std::string summary = slurp(dir / "run1" / "summary.json");
    CHECK(summary.find("\"status\": \"ok\"") != std::string::npos);
}

TEST_CASE("runner executes every experiment type") {
    std::ostringstream log;
    const fs::path dir = fs::path("cli_test_out") / "exp";
    fs::remove_all(dir);

    RunConfig c;
    c.alpha = 0.6;
    c.beta = 0.2;
    c.b_coeffs = {0.2};
    c.basis_size = 48;
    c.output_dir = (dir / "eigfun").string();
    c.experiment = "eigfun";
    c.n_list = {0, 2, 5};
    c.grid_points = 40;
    CHECK(run_experiment(c, log) == 0);
    CHECK(fs::exists(dir / "eigfun" / "eigfun.csv"));

    c.experiment = "asymptotics";
    c.output_dir = (dir / "asym").string();
    c.lemmas = {"sigma2", "cn"};
    c.n_lo = 8;
    c.n_hi = 20;
    c.t_points = 12;
    CHECK(run_experiment(c, log) == 0);
    CHECK(fs::exists(dir / "asym" / "residuals.csv"));

    c.experiment = "kernel-diff";
    c.output_dir = (dir / "kd").string();
    c.x_list = {0.7};
    c.N_list = {4, 8, 12, 16, 20, 24, 28, 32};
    c.y_points = 60;
    CHECK(run_experiment(c, log) == 0);
    CHECK(fs::exists(dir / "kd" / "kernel_diff_x0.csv"));
    CHECK(fs::exists(dir / "kd" / "summary.json"));

    c.experiment = "equiconv";
    c.output_dir = (dir / "eq").string();
    c.function = "indicator 0.3 0.8";
    c.N_list = {6, 12, 18, 24, 30};
    c.grid_points = 40;
    CHECK(run_experiment(c, log) == 0);
    CHECK(fs::exists(dir / "eq" / "equiconv.csv"));
    CHECK(fs::exists(dir / "eq" / "equiconv_trace.csv"));

    // every artifact embeds the config as comment lines
    const std::string csv = slurp(dir / "eq" / "equiconv.csv");
    CHECK(csv.rfind("# experiment = equiconv", 0) == 0);
    CHECK(csv.find("# function = indicator 0.3 0.8") != std::string::npos);
}

TEST_CASE("environment variable overrides the output directory") {
    std::ostringstream log;
    const fs::path dir = fs::path("cli_test_out") / "envdir";
    fs::remove_all(dir);
    RunConfig c;
    c.experiment = "spectrum";
    c.basis_size = 32;
    c.n_max = 5;
    c.output_dir = "cli_test_out/ignored";
    setenv("EQUIJAC_OUTPUT_DIR", dir.c_str(), 1);
    const int code = run_experiment(c, log);
    unsetenv("EQUIJAC_OUTPUT_DIR");
    CHECK(code == 0);
    CHECK(fs::exists(dir / "spectrum.csv"));
    CHECK(!fs::exists(fs::path("cli_test_out/ignored") / "spectrum.csv"));
}

TEST_CASE("cli exit codes") {
    const fs::path dir = fs::path("cli_test_out");
    fs::create_directories(dir);
    const fs::path bad = dir / "bad.cfg";
    {
        std::ofstream out(bad);
        out << "experiment = kernel-diff\nx_list = 3.0\nN_list = 10\n";
    }
    CHECK(run_cli("run " + bad.string()) == 1);
    CHECK(run_cli("") == 1);
    CHECK(run_cli("run missing_file.cfg") == 1);
    CHECK(run_cli("frobnicate") == 1);
}
