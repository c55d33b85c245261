#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "hadfrac/experiment.hpp"

using namespace hadfrac;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(HADFRAC_CLI_PATH) + " " + args +
                            " > /dev/null 2> /dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("result tables round-trip doubles at 17 digits", "[cli]") {
    ResultTable t({"x", "y"});
    t.add_row({1.0 / 3.0, 2.718281828459045});
    const std::string csv = t.to_csv();
    CHECK(csv.find("0.33333333333333331") != std::string::npos);
    CHECK(csv.find("2.7182818284590451") != std::string::npos);
    CHECK_THROWS_AS(t.add_row({1.0}), std::invalid_argument);
}

TEST_CASE("config validation happens before any computation", "[cli]") {
    ExperimentConfig cfg;
    cfg.command = CommandKind::verify_extremum;
    cfg.count = 0;
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);

    cfg = ExperimentConfig{};
    cfg.command = CommandKind::convergence;
    cfg.selector = "ch:mms_quadlog";
    cfg.ladder = {32, 64};  // too short
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);

    cfg = ExperimentConfig{};
    cfg.command = CommandKind::solve_diffusion;
    cfg.selector = "no_such_problem";
    cfg.nx = 8;
    cfg.nt = 8;
    CHECK_THROWS_AS(run_experiment(cfg), UnknownKeyError);
}

TEST_CASE("unknown keys list the available catalog", "[cli]") {
    ExperimentConfig cfg;
    cfg.command = CommandKind::solve_elliptic;
    cfg.selector = "bogus";
    try {
        run_experiment(cfg);
        FAIL("expected UnknownKeyError");
    } catch (const UnknownKeyError& e) {
        const std::string what = e.what();
        CHECK(what.find("ell_mms_quadlog_1d") != std::string::npos);
        CHECK(what.find("bogus") != std::string::npos);
    }
}

TEST_CASE("identical configs give byte-identical tables modulo timestamp",
          "[cli]") {
    ExperimentConfig cfg;
    cfg.command = CommandKind::verify_extremum;
    cfg.count = 5;
    cfg.n = 256;
    cfg.alphas = {0.5};
    const auto a = run_experiment(cfg);
    const auto b = run_experiment(cfg);
    CHECK(csv_without_timestamp(a.table.to_csv()) ==
          csv_without_timestamp(b.table.to_csv()));
    CHECK(a.exit_code == 0);
}

TEST_CASE("frac-op matches the closed form through the config surface",
          "[cli]") {
    ExperimentConfig cfg;
    cfg.command = CommandKind::frac_op;
    cfg.selector = "log_power:2";
    cfg.op = "hadamard";
    cfg.alpha = 0.5;
    cfg.n = 1024;
    cfg.grid_a = 1.0;
    cfg.t_end = 2.718281828459045;
    const auto out = run_experiment(cfg);
    CHECK(out.exit_code == 0);
    REQUIRE(out.table.rows().size() == 1024);
    // error column stays small at every reported node
    for (const auto& row : out.table.rows()) {
        if (row[0] < 1.1) continue;
        CHECK(std::abs(row[3]) <= 1e-3 * std::max(1.0, std::abs(row[2])));
    }
}

TEST_CASE("convergence ladder reports saturated levels for constants",
          "[cli]") {
    ExperimentConfig cfg;
    cfg.command = CommandKind::convergence;
    cfg.selector = "op:constant:3";
    cfg.op = "caputo";
    cfg.ladder = {32, 64, 128, 256};
    const auto out = run_experiment(cfg);
    CHECK(out.exit_code == 0);
    for (std::size_t i = 0; i < out.table.rows().size(); ++i) {
        const auto& row = out.table.rows()[i];
        CHECK(row[1] <= 1e-10);            // error
        if (i > 0) CHECK(row[3] == 1.0);   // saturated flag
        CHECK(row[4] == 1.0);              // order_ok
    }
}

TEST_CASE("convergence ladders meet the promised rates", "[cli]") {
    // Temporal ladders need the space resolved well below the finest
    // temporal error, otherwise the spatial floor caps the observed order.
    ExperimentConfig cfg;
    cfg.command = CommandKind::convergence;
    cfg.selector = "ch:mms_quadlog";
    cfg.alpha = 0.5;
    cfg.nx = 1024;
    cfg.ladder = {16, 32, 64, 128};
    const auto out = run_experiment(cfg);
    CHECK(out.exit_code == 0);

    cfg.selector = "ell:ell_mms_quadlog_1d";
    cfg.ladder = {32, 64, 128, 256};
    const auto ell = run_experiment(cfg);
    CHECK(ell.exit_code == 0);
}

TEST_CASE("cli binary honours the exit-status contract", "[cli]") {
    const std::string out = "/tmp/hadfrac_cli_test.csv";
    CHECK(run_cli("verify-extremum --alpha 0.5 --count 3 --seed 42 --n 256 "
                  "--out " + out) == 0);
    CHECK(run_cli("solve-diffusion --problem no_such_key --nx 8 --nt 8 "
                  "--out " + out) == 2);
    CHECK(run_cli("frac-op --input log_power:nonsense --out " + out) == 2);
    CHECK(run_cli("totally-unknown-subcommand") != 0);
}

TEST_CASE("cli binary reruns are byte-identical modulo timestamp", "[cli]") {
    const std::string out1 = "/tmp/hadfrac_repro_1.csv";
    const std::string out2 = "/tmp/hadfrac_repro_2.csv";
    const std::string args =
        "frac-op --op hadamard --input log_power:2 --alpha 0.5 --n 64 "
        "--grid 1:2.71828 --out ";
    REQUIRE(run_cli(args + out1) == 0);
    REQUIRE(run_cli(args + out2) == 0);
    CHECK(csv_without_timestamp(slurp(out1)) ==
          csv_without_timestamp(slurp(out2)));
    std::remove(out1.c_str());
    std::remove(out2.c_str());
}

TEST_CASE("json config files feed the flags", "[cli]") {
    const std::string cfg_path = "/tmp/hadfrac_config_test.json";
    {
        std::ofstream cfg(cfg_path);
        cfg << R"({"problem": "const5", "nx": 8, "nt": 8, "alpha": 0.4})";
    }
    const std::string out = "/tmp/hadfrac_config_out.csv";
    CHECK(run_cli("solve-diffusion --problem const5 --config " + cfg_path +
                  " --out " + out) == 0);
    const std::string csv = slurp(out);
    CHECK(csv.find("# alpha: 0.4") != std::string::npos);
    CHECK(csv.find("# nx: 8") != std::string::npos);
    // Flags override the file.
    CHECK(run_cli("solve-diffusion --problem const5 --config " + cfg_path +
                  " --alpha 0.3 --out " + out) == 0);
    CHECK(slurp(out).find("# alpha: 0.3") != std::string::npos);
    std::remove(cfg_path.c_str());
    std::remove(out.c_str());
}
