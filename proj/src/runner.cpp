#include "banksim/runner.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>

#include "banksim/errors.hpp"
#include "banksim/parallel.hpp"
#include "banksim/run_output.hpp"

namespace banksim::run {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string prepare_dir(const RunConfig& cfg) {
    const std::string dir = resolve_out_dir(cfg);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw io_error("cannot create output directory '" + dir + "': " + ec.message());
    return dir;
}

} // namespace

std::string resolve_out_dir(const RunConfig& cfg) {
    if (!cfg.out_dir.empty()) return cfg.out_dir;
    if (const char* env = std::getenv("BANKSIM_OUT"); env && *env) return env;
    return "banksim_out";
}

std::vector<std::string> simulate(const RunConfig& cfg) {
    const auto start_time = Clock::now();
    const std::string dir = prepare_dir(cfg);
    const ModelSpec spec = model_from_config(cfg);
    const TimeGrid grid = make_grid(cfg.t0, cfg.t1, cfg.dt);
    validate_spec(spec, grid);
    const SystemState start = initial_state(spec, cfg.t0);
    const StepTable table = build_step_table(spec, grid);

    std::vector<PathRecord> records(cfg.n_paths);
    std::vector<std::pair<std::size_t, std::vector<RecordedPoint>>> recorded;
    const std::size_t n_recorded = std::min(cfg.record_paths, cfg.n_paths);
    recorded.resize(n_recorded);

    const unsigned workers = resolve_threads(cfg.threads);
    std::vector<NoiseBlock> scratch(std::min<std::size_t>(workers, cfg.n_paths));
    parallel_for(cfg.n_paths, cfg.threads, [&](unsigned worker, std::size_t p) {
        NoiseBlock& noise = scratch[worker];
        sample_noise_into(noise, grid, spec.n_banks, cfg.seed, p);
        SimulateOptions options;
        options.record = p < n_recorded;
        options.max_recorded_points = cfg.record_points;
        PathResult res = simulate_path_with_table(spec, table, start, grid, noise, options);
        PathRecord rec;
        rec.path = p;
        rec.n_defaults = static_cast<std::uint32_t>(res.defaults.size());
        rec.mean_hit = res.mean_hit;
        rec.terminal_live = res.terminal.active_count();
        if (rec.terminal_live > 0) rec.terminal_mean = empirical_mean(res.terminal);
        rec.defaults = std::move(res.defaults);
        records[p] = std::move(rec);
        if (options.record) recorded[p] = {p, std::move(res.recorded)};
    });

    std::vector<std::string> files;
    files.push_back(write_paths_csv(dir, records));
    files.push_back(write_defaults_csv(dir, records));
    files.push_back(write_trajectories_csv(dir, recorded));
    files.push_back(write_manifest(dir, "simulate", cfg, files, seconds_since(start_time)));
    return files;
}

std::vector<std::string> loss_dist(const RunConfig& cfg) {
    const auto start_time = Clock::now();
    const std::string dir = prepare_dir(cfg);
    const ModelSpec spec = model_from_config(cfg);
    const TimeGrid grid = make_grid(cfg.t0, cfg.t1, cfg.dt);
    const SystemState start = initial_state(spec, cfg.t0);

    const auto summaries =
        simulate_ensemble(spec, start, grid, cfg.n_paths, cfg.seed, cfg.threads);
    const LossDistribution dist = make_loss_distribution(summaries, spec.n_banks);
    const std::vector<RiskEstimate> estimates = {
        estimate_from_summaries(summaries, spec.n_banks,
                                SystemicDefinition::majority_defaults),
        estimate_from_summaries(summaries, spec.n_banks, SystemicDefinition::mean_barrier),
    };

    std::vector<std::string> files;
    files.push_back(write_loss_distribution_csv(dir, dist));
    files.push_back(write_risk_estimates_csv(dir, estimates));
    files.push_back(write_manifest(dir, "loss-dist", cfg, files, seconds_since(start_time)));
    return files;
}

std::vector<std::string> riccati(const RunConfig& cfg) {
    const auto start_time = Clock::now();
    const std::string dir = prepare_dir(cfg);
    validate_run_config(cfg);

    ControlProblem problem;
    problem.lambda = cfg.lambda;
    problem.t_start = cfg.t0;
    problem.t_end = cfg.t1;
    problem.targets = make_perturbed(target_from_config(cfg, cfg.t0, cfg.t1), cfg.epsilon);
    problem.sigma = schedule_from_config(cfg).value(cfg.t0);
    const RiccatiSolution sol = solve_riccati(problem, cfg.dt_ode);

    std::vector<std::string> files;
    files.push_back(write_riccati_csv(dir, sol));
    if (cfg.epsilon > 0.0) {
        const TimeGrid grid = make_grid(cfg.t0, cfg.t1, cfg.dt);
        const ControlLaw law = derive_control_law(sol, problem.targets, grid);
        files.push_back(write_control_law_csv(dir, law));
    }
    files.push_back(write_manifest(dir, "riccati", cfg, files, seconds_since(start_time)));
    return files;
}

std::vector<std::string> meanfield(const RunConfig& cfg) {
    const auto start_time = Clock::now();
    const std::string dir = prepare_dir(cfg);
    validate_run_config(cfg);
    const TimeGrid grid = make_grid(cfg.t0, cfg.t1, cfg.dt);
    const NoiseBlock noise = sample_noise(grid, 1, cfg.seed, 0);
    const VolSchedule vol = schedule_from_config(cfg);

    MeanFieldPath path;
    bool has_mean = false;
    if (cfg.family == "supported") {
        const auto targets =
            make_perturbed(target_from_config(cfg, cfg.t0, cfg.t1), cfg.epsilon);
        const double alpha = cfg.alpha;
        const double gamma = cfg.gamma;
        if (gamma > 0.0)
            throw config_error("meanfield: gamma must be <= 0");
        path = simulate_meanfield_two(
            targets, [alpha](double) { return alpha; }, [gamma](double) { return gamma; },
            vol, grid, noise);
        has_mean = true;
    } else {
        // no coupling, no reversion in the limit
        const double alpha = cfg.family == "coupled" ? cfg.alpha : 0.0;
        const auto values =
            simulate_meanfield_ou(alpha, vol.value(cfg.t0), 0.0, grid, noise);
        path.t.resize(values.size());
        for (std::size_t k = 0; k < values.size(); ++k) path.t[k] = grid.time(k);
        path.x = values;
        path.xbar.assign(values.size(), 0.0);
    }

    // decimate to the recording budget
    const std::size_t points = path.t.size();
    const std::size_t budget = std::max<std::size_t>(2, cfg.record_points);
    const std::size_t stride = std::max<std::size_t>(1, (points + budget - 2) / (budget - 1));
    MeanFieldPath thin;
    for (std::size_t i = 0; i < points; i += stride) {
        thin.t.push_back(path.t[i]);
        thin.x.push_back(path.x[i]);
        thin.xbar.push_back(path.xbar[i]);
    }
    if ((points - 1) % stride != 0) {
        thin.t.push_back(path.t[points - 1]);
        thin.x.push_back(path.x[points - 1]);
        thin.xbar.push_back(path.xbar[points - 1]);
    }

    std::vector<std::string> files;
    files.push_back(write_meanfield_csv(dir, thin, has_mean));
    files.push_back(write_manifest(dir, "meanfield", cfg, files, seconds_since(start_time)));
    return files;
}

std::vector<std::string> govern(const RunConfig& cfg) {
    const auto start_time = Clock::now();
    const std::string dir = prepare_dir(cfg);
    const GovernanceConfig gov = governance_from_config(cfg);
    const ExperimentResult result = run_experiment(gov, !cfg.ungoverned);

    std::vector<std::string> files;
    files.push_back(write_series_csv(dir, result.series));
    if (result.governed) {
        files.push_back(write_quarters_csv(dir, result.quarters));
        files.push_back(write_candidates_csv(dir, result.quarters, gov));
    }
    files.push_back(write_realized_csv(dir, result.realized));
    files.push_back(write_experiment_summary(dir, result));
    files.push_back(write_manifest(dir, "govern", cfg, files, seconds_since(start_time)));
    return files;
}

std::vector<std::string> dispatch(const std::string& command, const RunConfig& cfg) {
    if (command == "simulate") return simulate(cfg);
    if (command == "loss-dist") return loss_dist(cfg);
    if (command == "riccati") return riccati(cfg);
    if (command == "meanfield") return meanfield(cfg);
    if (command == "govern") return govern(cfg);
    throw config_error("unknown command '" + command + "'");
}

} // namespace banksim::run
