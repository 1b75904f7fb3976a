#include "banksim/model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "banksim/errors.hpp"

namespace banksim {

ModelSpec ModelSpec::independent(std::size_t n, VolSchedule vol, double default_level) {
    if (n < 1) throw config_error("model: need at least one bank");
    ModelSpec spec;
    spec.family = Family::independent;
    spec.n_banks = n;
    spec.vol = std::move(vol);
    spec.default_level = default_level;
    return spec;
}

ModelSpec ModelSpec::coupled(std::size_t n, double alpha, VolSchedule vol, double default_level) {
    if (n < 2) throw config_error("model: coupled family needs at least two banks");
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw config_error("model: alpha must be finite and >= 0");
    ModelSpec spec;
    spec.family = Family::coupled;
    spec.n_banks = n;
    spec.alpha_fn = [alpha](double) { return alpha; };
    spec.vol = std::move(vol);
    spec.default_level = default_level;
    return spec;
}

ModelSpec ModelSpec::supported(std::size_t n,
                               std::function<double(double)> alpha_fn,
                               std::function<double(double)> gamma_fn,
                               VolSchedule vol, PerturbedTargets targets,
                               double default_level) {
    if (n < 2) throw config_error("model: supported family needs at least two banks");
    if (!alpha_fn || !gamma_fn)
        throw config_error("model: supported family needs both rate functions");
    ModelSpec spec;
    spec.family = Family::supported;
    spec.n_banks = n;
    spec.alpha_fn = std::move(alpha_fn);
    spec.gamma_fn = std::move(gamma_fn);
    spec.vol = std::move(vol);
    spec.targets = std::move(targets);
    spec.default_level = default_level;
    return spec;
}

void validate_spec(const ModelSpec& spec, const TimeGrid& grid) {
    if (!std::isfinite(spec.default_level))
        throw config_error("model: default level must be finite");
    if (spec.family == Family::supported && !spec.targets)
        throw config_error("model: supported family without targets");
    for (std::size_t k = 0; k <= grid.n_steps; ++k) {
        const double t = grid.time(k);
        if (spec.alpha_fn) {
            const double a = spec.alpha_fn(t);
            if (!std::isfinite(a) || a < 0.0)
                throw config_error("model: alpha(t) must be >= 0, got " + std::to_string(a) +
                                   " at t=" + std::to_string(t));
        }
        if (spec.gamma_fn) {
            const double g = spec.gamma_fn(t);
            if (!std::isfinite(g) || g > 0.0)
                throw config_error("model: gamma(t) must be <= 0, got " + std::to_string(g) +
                                   " at t=" + std::to_string(t));
        }
    }
    if (spec.targets && spec.targets->base.min_value() <= spec.default_level)
        throw config_error("model: target trajectory does not stay above the default level");
}

SystemState initial_state(const ModelSpec& spec, double t0) {
    SystemState state;
    state.t = t0;
    state.ids.resize(spec.n_banks);
    std::iota(state.ids.begin(), state.ids.end(), std::size_t{0});
    const double x0 = spec.family == Family::supported ? spec.targets->upper(t0) : 0.0;
    state.reserves.assign(spec.n_banks, x0);
    return state;
}

double empirical_mean(const SystemState& state) {
    if (state.reserves.empty())
        throw state_error("empirical_mean: no live banks");
    double sum = 0.0;
    for (double x : state.reserves) sum += x;
    return sum / static_cast<double>(state.reserves.size());
}

std::vector<double> drift(const ModelSpec& spec, const SystemState& state, double t) {
    const std::size_t n = state.reserves.size();
    if (n == 0)
        throw state_error("drift: no live banks");
    std::vector<double> out(n, 0.0);
    if (spec.family == Family::independent) return out;
    // 1/N weights always use the live count, not the initial one
    const double mean = empirical_mean(state);
    const double alpha = spec.alpha_fn(t);
    double common = 0.0;
    if (spec.family == Family::supported) {
        common = spec.gamma_fn(t) * (mean - spec.targets->lower(t)) +
                 spec.targets->upper_derivative(t);
    }
    for (std::size_t i = 0; i < n; ++i)
        out[i] = alpha * (mean - state.reserves[i]) + common;
    return out;
}

StepTable build_step_table(const ModelSpec& spec, const TimeGrid& grid) {
    StepTable table;
    const std::size_t n = grid.n_steps;
    table.sigma.resize(n);
    table.alpha.assign(n, 0.0);
    table.gamma.assign(n, 0.0);
    table.target_lower.assign(n, 0.0);
    table.target_upper_slope.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = grid.time(k);
        table.sigma[k] = spec.vol.value(t);
        if (spec.family != Family::independent) table.alpha[k] = spec.alpha_fn(t);
        if (spec.family == Family::supported) {
            table.gamma[k] = spec.gamma_fn(t);
            table.target_lower[k] = spec.targets->lower(t);
            table.target_upper_slope[k] = spec.targets->upper_derivative(t);
        }
    }
    return table;
}

namespace {

struct Recorder {
    bool enabled = false;
    std::size_t stride = 1;
    std::size_t last_index = 0;
    std::vector<RecordedPoint>* out = nullptr;

    void maybe_record(std::size_t k, double t, const std::vector<std::size_t>& ids,
                      const std::vector<double>& x) const {
        if (!enabled) return;
        if (k % stride != 0 && k != last_index) return;
        out->push_back(RecordedPoint{t, ids, x});
    }
};

} // namespace

PathResult simulate_path_with_table(const ModelSpec& spec, const StepTable& table,
                                    const SystemState& start, const TimeGrid& grid,
                                    const NoiseBlock& noise,
                                    const SimulateOptions& options) {
    if (noise.n_steps < grid.n_steps || noise.n_banks < spec.n_banks)
        throw std::logic_error("simulate_path: noise block smaller than the run");
    if (start.ids.size() != start.reserves.size())
        throw std::logic_error("simulate_path: inconsistent state");

    PathResult result;
    std::vector<std::size_t> ids = start.ids;
    std::vector<double> x = start.reserves;
    const double level = spec.default_level;
    const double dt = grid.dt;
    const bool interacting = spec.family != Family::independent;
    const bool supported = spec.family == Family::supported;

    Recorder rec;
    if (options.record) {
        rec.enabled = true;
        rec.out = &result.recorded;
        const std::size_t points = grid.n_points();
        const std::size_t budget = std::max<std::size_t>(2, options.max_recorded_points);
        rec.stride = std::max<std::size_t>(1, (points + budget - 2) / (budget - 1));
        rec.last_index = grid.n_steps;
    }

    // removal + barrier bookkeeping at one grid time; returns live count
    const auto settle = [&](double t) {
        std::size_t w = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] <= level) {
                result.defaults.push_back(DefaultEvent{ids[i], t});
            } else {
                ids[w] = ids[i];
                x[w] = x[i];
                ++w;
            }
        }
        ids.resize(w);
        x.resize(w);
        if (w == 0) {
            result.mean_hit = true;
            return w;
        }
        double sum = 0.0;
        for (double v : x) sum += v;
        if (sum / static_cast<double>(w) <= level) result.mean_hit = true;
        return w;
    };

    std::size_t live = settle(grid.t0);
    rec.maybe_record(0, grid.t0, ids, x);

    for (std::size_t k = 0; k < grid.n_steps && live > 0; ++k) {
        const double sig = table.sigma[k];
        const double* dw = noise.row(k);
        if (interacting) {
            double sum = 0.0;
            for (double v : x) sum += v;
            const double mean = sum / static_cast<double>(live);
            const double alpha = table.alpha[k];
            const double common =
                supported ? table.gamma[k] * (mean - table.target_lower[k]) +
                                table.target_upper_slope[k]
                          : 0.0;
            for (std::size_t i = 0; i < live; ++i)
                x[i] += (alpha * (mean - x[i]) + common) * dt + sig * dw[ids[i]];
        } else {
            for (std::size_t i = 0; i < live; ++i)
                x[i] += sig * dw[ids[i]];
        }
        const double t_next = grid.time(k + 1);
        live = settle(t_next);
        rec.maybe_record(k + 1, t_next, ids, x);
    }

    result.terminal.t = grid.t1;
    result.terminal.ids = std::move(ids);
    result.terminal.reserves = std::move(x);
    return result;
}

PathResult simulate_path(const ModelSpec& spec, const SystemState& start,
                         const TimeGrid& grid, const NoiseBlock& noise,
                         const SimulateOptions& options) {
    const StepTable table = build_step_table(spec, grid);
    return simulate_path_with_table(spec, table, start, grid, noise, options);
}

} // namespace banksim
