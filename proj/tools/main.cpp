#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "banksim/config.hpp"
#include "banksim/errors.hpp"
#include "banksim/runner.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    bool quick = false;
    bool ungoverned = false;
    long long seed = -1;
    long long n_paths = -1;
    double dt = -1.0;
    long long threads = -1;
};

void add_common(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--config", opt.config_path, "key = value configuration file");
    cmd->add_option("--set", opt.overrides, "override a config key, e.g. --set n_paths=500")
        ->take_all();
    cmd->add_option("--out", opt.out_dir, "output directory (default $BANKSIM_OUT or ./banksim_out)");
    cmd->add_option("--seed", opt.seed, "master seed");
    cmd->add_option("--n-paths", opt.n_paths, "sample paths per estimate");
    cmd->add_option("--dt", opt.dt, "simulation step");
    cmd->add_option("--threads", opt.threads, "worker threads (0 = all cores)");
    cmd->add_flag("--quick", opt.quick, "reduced preset: 2000 paths at dt = 1e-3");
}

banksim::RunConfig build_config(const CliOptions& opt) {
    banksim::RunConfig cfg;
    if (!opt.config_path.empty())
        cfg = banksim::parse_config_file(opt.config_path);
    for (const auto& kv : opt.overrides)
        banksim::apply_override(cfg, kv);
    if (opt.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opt.seed);
    if (opt.n_paths > 0) cfg.n_paths = static_cast<std::size_t>(opt.n_paths);
    if (opt.dt > 0.0) cfg.dt = opt.dt;
    if (opt.threads >= 0) cfg.threads = static_cast<unsigned>(opt.threads);
    if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
    if (opt.quick) banksim::apply_quick(cfg);
    if (opt.ungoverned) cfg.ungoverned = true;
    banksim::validate_run_config(cfg);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"banking-system simulation and risk governance toolkit"};
    app.require_subcommand(1);

    CliOptions opt;
    std::string command;
    auto* sim = app.add_subcommand("simulate", "simulate system paths and record trajectories");
    auto* loss = app.add_subcommand("loss-dist", "estimate the loss distribution and systemic risk");
    auto* ric = app.add_subcommand("riccati", "solve the tracking problem and export the rate law");
    auto* mf = app.add_subcommand("meanfield", "simulate the large-population limit");
    auto* gov = app.add_subcommand("govern", "run the quarterly risk-governance experiment");
    for (auto* cmd : {sim, loss, ric, mf, gov}) add_common(cmd, opt);
    gov->add_flag("--ungoverned", opt.ungoverned,
                  "run the fixed-parameter reference system instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    for (auto* cmd : {sim, loss, ric, mf, gov})
        if (cmd->parsed()) command = cmd->get_name();

    try {
        const banksim::RunConfig cfg = build_config(opt);
        const auto files = banksim::run::dispatch(command, cfg);
        std::cout << command << ": wrote " << files.size() << " files to "
                  << banksim::run::resolve_out_dir(cfg) << '\n';
        return 0;
    } catch (const banksim::config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const banksim::io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
