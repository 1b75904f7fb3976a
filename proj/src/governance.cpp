#include "banksim/governance.hpp"

#include <cmath>
#include <string>

#include "banksim/errors.hpp"
#include "banksim/time_grid.hpp"

namespace banksim {

namespace {

constexpr std::uint64_t kSaltCandidate = 1ull << 40;
constexpr std::uint64_t kSaltRealized = 2ull << 40;
constexpr std::uint64_t kSaltReference = 3ull << 40;

std::uint64_t candidate_seed(const GovernanceConfig& cfg, std::size_t quarter, int n) {
    const auto offset = static_cast<std::uint64_t>(n + cfg.menu_steps);
    return philox::mix_seed(cfg.seed, kSaltCandidate | (quarter << 8) | offset);
}

std::uint64_t realized_seed(const GovernanceConfig& cfg, std::size_t quarter) {
    return philox::mix_seed(cfg.seed, kSaltRealized | quarter);
}

std::uint64_t reference_seed(const GovernanceConfig& cfg, std::size_t quarter) {
    return philox::mix_seed(cfg.seed, kSaltReference | quarter);
}

double band_distance(double p, const GovernanceConfig& cfg) {
    if (p < cfg.s1) return cfg.s1 - p;
    if (p > cfg.s2) return p - cfg.s2;
    return 0.0;
}

ModelSpec spec_under_law(const GovernanceConfig& cfg,
                         std::shared_ptr<const ControlLaw> law,
                         const PerturbedTargets& targets, VolSchedule vol) {
    auto alpha_fn = [law](double t) { return law->alpha_at(t); };
    auto gamma_fn = [law](double t) { return law->gamma_at(t); };
    return ModelSpec::supported(cfg.n_banks, alpha_fn, gamma_fn, std::move(vol),
                                targets, cfg.default_level);
}

ModelSpec baseline_spec(const GovernanceConfig& cfg, double t0, double horizon,
                        VolSchedule vol) {
    auto targets = make_perturbed(
        TargetTrajectory::constant(t0, t0 + horizon, cfg.xi0), cfg.epsilon);
    const double gamma = cfg.baseline_gamma;
    const double alpha = cfg.baseline_alpha;
    return ModelSpec::supported(
        cfg.n_banks, [alpha](double) { return alpha; },
        [gamma](double) { return gamma; }, std::move(vol), std::move(targets),
        cfg.default_level);
}

} // namespace

void validate_config(const GovernanceConfig& cfg) {
    if (cfg.n_banks < 2)
        throw config_error("governance: need at least two banks");
    if (!(cfg.epsilon > 0.0))
        throw config_error("governance: epsilon must be positive");
    if (!(cfg.lambda > 0.0))
        throw config_error("governance: lambda must be positive");
    if (!(0.0 < cfg.s1 && cfg.s1 < cfg.s2 && cfg.s2 < 1.0))
        throw config_error("governance: need 0 < s1 < s2 < 1");
    if (!(cfg.dtau > 0.0) || !(cfg.lookahead > 0.0))
        throw config_error("governance: dtau and lookahead must be positive");
    if (cfg.lookahead < cfg.dtau)
        throw config_error("governance: lookahead shorter than the decision spacing");
    if (cfg.menu_steps < 1)
        throw config_error("governance: menu_steps must be at least 1");
    if (!(cfg.dt_sim > 0.0) || !(cfg.dt_ode > 0.0))
        throw config_error("governance: step sizes must be positive");
    if (cfg.n_paths == 0)
        throw config_error("governance: n_paths must be positive");
    if (!(cfg.xi0 + cfg.epsilon > cfg.default_level))
        throw config_error("governance: resting target sits at or under the default level");
    const double span = cfg.t_end - cfg.t_start - cfg.lookahead;
    if (span < -1e-9)
        throw config_error("governance: horizon shorter than one lookahead");
    const double steps = span / cfg.dtau;
    if (std::fabs(steps - std::round(steps)) > 1e-6)
        throw config_error("governance: dtau does not divide the decision span");
}

std::size_t decision_count(const GovernanceConfig& cfg) {
    const double span = cfg.t_end - cfg.t_start - cfg.lookahead;
    return static_cast<std::size_t>(std::llround(span / cfg.dtau)) + 1;
}

std::vector<CandidateTrajectory> build_menu(double xi_anchor, double tau1,
                                            const GovernanceConfig& cfg) {
    if (!(xi_anchor > cfg.default_level))
        throw config_error("menu: anchor " + std::to_string(xi_anchor) +
                           " not above the default level");
    std::vector<CandidateTrajectory> menu;
    menu.reserve(2 * cfg.menu_steps + 1);
    const double knee = tau1 + cfg.dtau;
    const double tau2 = tau1 + cfg.lookahead;
    for (int n = -cfg.menu_steps; n <= cfg.menu_steps; ++n) {
        const double slope = static_cast<double>(n) / cfg.menu_steps;
        const double plateau = xi_anchor + slope * cfg.dtau;
        TargetSegment ramp;
        ramp.kind = TargetSegment::Kind::linear;
        ramp.t_begin = tau1;
        ramp.t_end = knee;
        ramp.value = xi_anchor;
        ramp.slope = slope;
        TargetSegment hold;
        hold.kind = TargetSegment::Kind::constant;
        hold.t_begin = knee;
        hold.t_end = tau2;
        hold.value = plateau;
        CandidateTrajectory cand;
        cand.n = n;
        cand.trajectory = TargetTrajectory({ramp, hold});
        cand.feasible = cand.trajectory.min_value() > cfg.default_level;
        menu.push_back(std::move(cand));
    }
    return menu;
}

CandidateEvaluation evaluate_candidate(const CandidateTrajectory& candidate,
                                       const SystemState& state,
                                       const GovernanceConfig& cfg,
                                       std::uint64_t seed) {
    const double tau1 = state.t;
    const double tau2 = tau1 + cfg.lookahead;
    const double frozen_sigma = cfg.vol.value(tau1);
    const auto targets = make_perturbed(candidate.trajectory, cfg.epsilon);

    ControlProblem problem;
    problem.lambda = cfg.lambda;
    problem.t_start = tau1;
    problem.t_end = tau2;
    problem.targets = targets;
    problem.sigma = frozen_sigma;
    const RiccatiSolution sol = solve_riccati(problem, cfg.dt_ode);

    const TimeGrid grid = make_grid(tau1, tau2, cfg.dt_sim);
    auto law = std::make_shared<const ControlLaw>(derive_control_law(sol, targets, grid));

    const ModelSpec spec =
        spec_under_law(cfg, law, targets, constant_vol(tau1, frozen_sigma));
    CandidateEvaluation eval;
    eval.n = candidate.n;
    eval.feasible = candidate.feasible;
    eval.estimate = systemic_risk_probability(spec, state, grid, cfg.n_paths, seed,
                                              cfg.threads,
                                              SystemicDefinition::majority_defaults);
    eval.law = std::move(law);
    return eval;
}

GovernanceRecord govern_quarter(const SystemState& state, double xi_anchor,
                                const GovernanceConfig& cfg, std::size_t quarter) {
    validate_config(cfg);
    const auto menu = build_menu(xi_anchor, state.t, cfg);
    const int steps = cfg.menu_steps;
    const auto& hold = menu[static_cast<std::size_t>(steps)];  // n = 0

    GovernanceRecord record;
    record.quarter = quarter;
    record.tau1 = state.t;
    record.xi_anchor = xi_anchor;

    record.evaluations.reserve(static_cast<std::size_t>(steps) + 1);

    const auto in_band = [&](double p) { return p >= cfg.s1 && p <= cfg.s2; };
    const auto evaluate = [&](const CandidateTrajectory& cand) {
        record.evaluations.push_back(
            evaluate_candidate(cand, state, cfg, candidate_seed(cfg, quarter, cand.n)));
        return record.evaluations.size() - 1;
    };

    if (!hold.feasible)
        throw governance_error("govern: hold candidate infeasible at t=" +
                               std::to_string(state.t));
    std::ptrdiff_t chosen = -1;
    const std::size_t first = evaluate(hold);
    if (in_band(record.evaluations[first].estimate.probability)) {
        chosen = static_cast<std::ptrdiff_t>(first);
    } else {
        // too safe -> walk the target down; too risky -> walk it up
        const int direction =
            record.evaluations[first].estimate.probability < cfg.s1 ? -1 : +1;
        for (int step = 1; step <= steps && chosen < 0; ++step) {
            const auto& cand = menu[static_cast<std::size_t>(steps + direction * step)];
            if (!cand.feasible) continue;
            const std::size_t i = evaluate(cand);
            if (in_band(record.evaluations[i].estimate.probability))
                chosen = static_cast<std::ptrdiff_t>(i);
        }
    }

    if (chosen < 0) {
        record.fallback = true;
        double best = -1.0;
        for (std::size_t i = 0; i < record.evaluations.size(); ++i) {
            const auto& eval = record.evaluations[i];
            if (!eval.feasible) continue;
            const double d = band_distance(eval.estimate.probability, cfg);
            if (best < 0.0 || d < best) {
                best = d;
                chosen = static_cast<std::ptrdiff_t>(i);
            }
        }
        if (chosen < 0)
            throw governance_error("govern: no feasible candidate at t=" +
                                   std::to_string(state.t));
    }

    const auto& pick = record.evaluations[static_cast<std::size_t>(chosen)];
    record.chosen_n = pick.n;
    record.chosen_estimate = pick.estimate;
    record.chosen_law = pick.law;
    record.chosen_candidate = menu[static_cast<std::size_t>(steps + pick.n)];
    return record;
}

ExperimentResult run_experiment(const GovernanceConfig& cfg, bool governed) {
    validate_config(cfg);
    const std::size_t decisions = decision_count(cfg);

    ExperimentResult result;
    result.governed = governed;

    SystemState state;
    state.t = cfg.t_start;
    state.ids.resize(cfg.n_banks);
    for (std::size_t i = 0; i < cfg.n_banks; ++i) state.ids[i] = i;
    state.reserves.assign(cfg.n_banks, cfg.xi0 + cfg.epsilon);

    double anchor = cfg.xi0 + cfg.epsilon;
    const std::size_t per_quarter_points =
        std::max<std::size_t>(16, cfg.record_points / std::max<std::size_t>(1, decisions));

    for (std::size_t j = 0; j < decisions; ++j) {
        const double tau1 = cfg.t_start + static_cast<double>(j) * cfg.dtau;
        state.t = tau1;
        const bool last = j + 1 == decisions;
        const double advance = last ? cfg.t_end - tau1 : cfg.dtau;

        SimulateOptions options;
        options.record = true;
        options.max_recorded_points = last ? 4 * per_quarter_points : per_quarter_points;

        if (governed) {
            GovernanceRecord record = govern_quarter(state, anchor, cfg, j);
            const auto targets = make_perturbed(record.chosen_candidate.trajectory, cfg.epsilon);
            const ModelSpec spec = spec_under_law(cfg, record.chosen_law, targets, cfg.vol);
            const TimeGrid quarter_grid = make_grid(tau1, tau1 + advance, cfg.dt_sim);
            const NoiseBlock noise =
                sample_noise(quarter_grid, cfg.n_banks, realized_seed(cfg, j), 0);
            PathResult realized = simulate_path(spec, state, quarter_grid, noise, options);

            result.series.push_back(SeriesPoint{j, tau1, record.chosen_estimate.probability,
                                                record.chosen_estimate.std_error,
                                                record.chosen_n, record.fallback});
            anchor = record.chosen_candidate.trajectory.value(tau1 + cfg.dtau);
            result.quarters.push_back(std::move(record));
            // the quarter's first record repeats the carried-over state
            for (std::size_t r = j > 0 ? 1 : 0; r < realized.recorded.size(); ++r)
                result.realized.push_back(std::move(realized.recorded[r]));
            state = std::move(realized.terminal);
            if (state.active_count() == 0)
                throw state_error("experiment: every bank defaulted at t=" +
                                  std::to_string(state.t));
        } else {
            const TimeGrid eval_grid = make_grid(tau1, tau1 + cfg.lookahead, cfg.dt_sim);
            const ModelSpec eval_spec = baseline_spec(
                cfg, tau1, cfg.lookahead, constant_vol(tau1, cfg.vol.value(tau1)));
            const RiskEstimate est = systemic_risk_probability(
                eval_spec, state, eval_grid, cfg.n_paths, reference_seed(cfg, j),
                cfg.threads, SystemicDefinition::majority_defaults);
            result.series.push_back(
                SeriesPoint{j, tau1, est.probability, est.std_error, std::nullopt, false});

            const TimeGrid quarter_grid = make_grid(tau1, tau1 + advance, cfg.dt_sim);
            const ModelSpec walk_spec = baseline_spec(cfg, tau1, advance, cfg.vol);
            const NoiseBlock noise =
                sample_noise(quarter_grid, cfg.n_banks, realized_seed(cfg, j), 0);
            PathResult realized =
                simulate_path(walk_spec, state, quarter_grid, noise, options);
            for (std::size_t r = j > 0 ? 1 : 0; r < realized.recorded.size(); ++r)
                result.realized.push_back(std::move(realized.recorded[r]));
            state = std::move(realized.terminal);
            if (state.active_count() == 0)
                throw state_error("experiment: every bank defaulted at t=" +
                                  std::to_string(state.t));
        }
    }

    result.final_state = std::move(state);
    return result;
}

} // namespace banksim
