// Batch experiment runner: problem configs in, CSV tables and one-line
// check summaries out.
//
//   hadfrac frac-op --op hadamard --input log_power:2 --alpha 0.5 --n 1024 \
//       --grid 1:2.71828
//   hadfrac verify-extremum --alpha 0.5 --count 1000 --seed 42 --n 2048
//   hadfrac solve-diffusion --problem mms_quadlog --nx 64 --nt 64
//   hadfrac convergence --study ch:mms_quadlog --ladder 32,64,128,256
//
// Exit status: 0 all checks pass, 1 any property violation or solver
// failure, 2 configuration error. Flags override values from an optional
// JSON config file (--config).

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hadfrac/experiment.hpp"

namespace {

using hadfrac::CommandKind;
using hadfrac::ExperimentConfig;

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::string cur;
    for (char ch : text + ",") {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(std::stod(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
    std::vector<std::size_t> out;
    for (double v : parse_double_list(text)) {
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

void apply_json_config(const std::string& path, ExperimentConfig& cfg) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot read config file '" + path + "'");
    }
    nlohmann::json j;
    in >> j;
    auto get = [&](const char* key, auto& target) {
        if (j.contains(key)) {
            target = j.at(key).template get<std::decay_t<decltype(target)>>();
        }
    };
    if (j.contains("problem")) cfg.selector = j.at("problem").get<std::string>();
    if (j.contains("input")) cfg.selector = j.at("input").get<std::string>();
    if (j.contains("study")) cfg.selector = j.at("study").get<std::string>();
    get("op", cfg.op);
    get("alpha", cfg.alpha);
    get("nu", cfg.nu);
    get("n", cfg.n);
    get("nx", cfg.nx);
    get("ny", cfg.ny);
    get("nt", cfg.nt);
    get("dims", cfg.dims);
    get("seed", cfg.seed);
    get("count", cfg.count);
    get("grading", cfg.grading);
    get("delta", cfg.delta);
    get("out", cfg.output_path);
    if (j.contains("t-end")) cfg.t_end = j.at("t-end").get<double>();
    if (j.contains("grid")) {
        const std::string grid = j.at("grid").get<std::string>();
        const auto colon = grid.find(':');
        cfg.grid_a = std::stod(grid.substr(0, colon));
        cfg.t_end = std::stod(grid.substr(colon + 1));
    }
    if (j.contains("alphas")) {
        cfg.alphas = parse_double_list(j.at("alphas").get<std::string>());
    }
    if (j.contains("ladder")) {
        cfg.ladder = parse_size_list(j.at("ladder").get<std::string>());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hadamard fractional calculus experiments"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string config_path;
    std::string grid_spec;
    std::string ladder_spec;
    std::string alphas_spec;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--alpha", cfg.alpha, "fractional order in (0,1)");
        sub->add_option("--nu", cfg.nu, "diffusivity");
        sub->add_option("--n", cfg.n, "grid intervals");
        sub->add_option("--nx", cfg.nx, "spatial intervals (x)");
        sub->add_option("--ny", cfg.ny, "spatial intervals (y)");
        sub->add_option("--nt", cfg.nt, "time intervals");
        sub->add_option("--dims", cfg.dims, "spatial dimensions (1 or 2)");
        sub->add_option("--seed", cfg.seed, "campaign seed");
        sub->add_option("--count", cfg.count, "sampled function count");
        sub->add_option("--grading", cfg.grading, "mesh grading exponent");
        sub->add_option("--delta", cfg.delta, "perturbation size");
        sub->add_option("--t-end", cfg.t_end, "time horizon T");
        sub->add_option("--out", cfg.output_path, "output CSV path");
        return sub;
    };

    auto* frac = add_common(app.add_subcommand(
        "frac-op", "apply a fractional operator to a catalog function"));
    frac->add_option("--input", cfg.selector, "input function key")
        ->required();
    frac->add_option("--op", cfg.op,
                     "operator: hadamard|hadamard-direct|caputo|integral");
    frac->add_option("--grid", grid_spec, "grid as a:T (default 1:e^2)");

    auto* verify = add_common(app.add_subcommand(
        "verify-extremum", "run the extremum-inequality fuzz campaign"));
    verify->add_option("--alphas", alphas_spec,
                       "comma list of orders (default 5-point sweep)");

    auto* sd = add_common(app.add_subcommand(
        "solve-diffusion", "solve a Caputo-Hadamard diffusion problem"));
    sd->add_option("--problem", cfg.selector, "catalog key")->required();

    auto* sg = add_common(app.add_subcommand(
        "solve-generalized", "solve a generalized diffusion problem"));
    sg->add_option("--problem", cfg.selector, "catalog key")->required();

    auto* se = add_common(
        app.add_subcommand("solve-elliptic", "solve an elliptic problem"));
    se->add_option("--problem", cfg.selector, "catalog key")->required();

    auto* conv = add_common(app.add_subcommand(
        "convergence", "run a refinement ladder on a manufactured problem"));
    conv->add_option("--study", cfg.selector,
                     "<family>:<key>, family op|ch|rh|ell")
        ->required();
    conv->add_option("--ladder", ladder_spec, "comma list of levels (>= 4)")
        ->required();

    // Config file first, flags override: pre-scan for --config, apply the
    // file, then parse the full command line on top of it.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                apply_json_config(argv[i + 1], cfg);
            } catch (const std::exception& e) {
                std::cerr << "config error: " << e.what() << '\n';
                return 2;
            }
        }
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (frac->parsed()) cfg.command = CommandKind::frac_op;
        if (verify->parsed()) cfg.command = CommandKind::verify_extremum;
        if (sd->parsed()) cfg.command = CommandKind::solve_diffusion;
        if (sg->parsed()) cfg.command = CommandKind::solve_generalized;
        if (se->parsed()) cfg.command = CommandKind::solve_elliptic;
        if (conv->parsed()) cfg.command = CommandKind::convergence;

        if (!grid_spec.empty()) {
            const auto colon = grid_spec.find(':');
            if (colon == std::string::npos) {
                throw std::invalid_argument("--grid expects a:T");
            }
            cfg.grid_a = std::stod(grid_spec.substr(0, colon));
            cfg.t_end = std::stod(grid_spec.substr(colon + 1));
        }
        if (!ladder_spec.empty()) cfg.ladder = parse_size_list(ladder_spec);
        if (!alphas_spec.empty()) cfg.alphas = parse_double_list(alphas_spec);
        if (cfg.command == CommandKind::verify_extremum &&
            cfg.alphas.empty() && verify->count("--alpha") > 0) {
            cfg.alphas = {cfg.alpha};
        }

        const auto outcome = hadfrac::run_experiment(cfg);
        const std::string path = hadfrac::resolve_output_path(cfg);
        outcome.table.write_csv(path);
        for (const auto& line : outcome.summary) {
            std::cout << line << '\n';
        }
        std::cout << "wrote " << path << '\n';
        return outcome.exit_code;
    } catch (const hadfrac::UnknownKeyError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const hadfrac::SolveError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
