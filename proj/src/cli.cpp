#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "leanreg/harness.hpp"

namespace leanreg {

namespace {

CiMethod method_from_flag(const std::string& s) {
    if (s == "wald") return CiMethod::Wald;
    if (s == "hulc") return CiMethod::HulC;
    if (s == "tstat") return CiMethod::TStat;
    if (s == "wild") return CiMethod::WildBootstrap;
    if (s == "pairs") return CiMethod::PairsBootstrap;
    throw ConfigError("unknown method '" + s + "'");
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"assumption-lean linear regression: debiased least squares, "
                 "confidence intervals, and coverage experiments"};
    app.require_subcommand(1);

    std::string sim_config;
    int sim_threads = 0;
    CLI::App* simulate = app.add_subcommand("simulate", "run a coverage/width experiment grid");
    simulate->add_option("--config", sim_config, "experiment config (JSON)")->required();
    simulate->add_option("--threads", sim_threads, "worker threads (default: config/auto)");

    FitRequest fit;
    std::string fit_method = "wald";
    CLI::App* fit_cmd = app.add_subcommand("fit", "fit one dataset and print a confidence interval");
    fit_cmd->add_option("--data", fit.data_path, "CSV file with header y,x1,...,xd")->required();
    fit_cmd->add_option("--contrast", fit.contrast, "coord:<k> or file:<path>")->required();
    fit_cmd->add_option("--method", fit_method, "wald|hulc|tstat|wild|pairs");
    fit_cmd->add_option("--alpha", fit.alpha, "miscoverage level (default 0.05)");
    fit_cmd->add_option("--seed", fit.seed, "rng seed (default 0)");
    fit_cmd->add_option("--n-boot", fit.n_boot, "bootstrap replicates (default 1000)");
    fit_cmd->add_option("--batches", fit.batches, "t-statistic batches (default 6)");
    fit_cmd->add_flag("--header", fit.header, "print a CSV header line first");

    std::string diag_config;
    int diag_threads = 0;
    CLI::App* diagnose = app.add_subcommand("diagnose", "concentration and bias-scaling sweeps");
    diagnose->add_option("--config", diag_config, "diagnostics config (JSON)")->required();
    diagnose->add_option("--threads", diag_threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) {
            ExperimentConfig cfg = load_experiment_config(sim_config);
            if (sim_threads > 0) cfg.threads = sim_threads;
            const SimulationResult result = run_simulation(cfg);
            write_simulation_outputs(cfg, result);
            std::cerr << "leanreg simulate: wrote " << result.rows.size() << " rows ("
                      << result.skipped.size() << " skipped) to " << cfg.out_dir << '\n';
            return 0;
        }
        if (fit_cmd->parsed()) {
            fit.method = method_from_flag(fit_method);
            return run_fit(fit, std::cout, std::cerr);
        }
        if (diagnose->parsed()) {
            DiagnoseConfig cfg = load_diagnose_config(diag_config);
            if (diag_threads > 0) cfg.threads = diag_threads;
            run_diagnose(cfg);
            std::cerr << "leanreg diagnose: wrote results to " << cfg.out_dir << '\n';
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "leanreg: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "leanreg: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace leanreg
