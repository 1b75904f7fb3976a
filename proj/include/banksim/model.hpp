#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "banksim/noise.hpp"
#include "banksim/time_grid.hpp"
#include "banksim/trajectory.hpp"
#include "banksim/vol_schedule.hpp"

namespace banksim {

enum class Family {
    independent,    // pure diffusions, no coupling
    coupled,        // mean-reversion toward the current cross-sectional mean
    supported,      // coupled + external support toward a target band
};

// One simulated banking system. alpha_fn (>= 0) is the strength of the
// borrowing/lending pull toward the pack mean, gamma_fn (<= 0) the support
// reaction to the gap between the pack mean and the lower target; both are
// sampled at grid times only. targets is required for Family::supported.
struct ModelSpec {
    Family family = Family::independent;
    std::size_t n_banks = 0;
    std::function<double(double)> alpha_fn;
    std::function<double(double)> gamma_fn;
    VolSchedule vol;
    std::optional<PerturbedTargets> targets;
    double default_level = 0.0;

    static ModelSpec independent(std::size_t n, VolSchedule vol, double default_level);
    static ModelSpec coupled(std::size_t n, double alpha, VolSchedule vol, double default_level);
    static ModelSpec supported(std::size_t n,
                               std::function<double(double)> alpha_fn,
                               std::function<double(double)> gamma_fn,
                               VolSchedule vol, PerturbedTargets targets,
                               double default_level);
};

// Rejects rate functions with the wrong sign anywhere on the grid, and a
// default level the targets dip under (supported family).
void validate_spec(const ModelSpec& spec, const TimeGrid& grid);

// Live banks only. ids keep the original 0..N-1 labels so noise columns stay
// attached to their bank after removals.
struct SystemState {
    double t = 0.0;
    std::vector<std::size_t> ids;
    std::vector<double> reserves;

    std::size_t active_count() const { return ids.size(); }
};

SystemState initial_state(const ModelSpec& spec, double t0);
double empirical_mean(const SystemState& state);

struct DefaultEvent {
    std::size_t bank = 0;
    double time = 0.0;
};

struct RecordedPoint {
    double t = 0.0;
    std::vector<std::size_t> ids;
    std::vector<double> reserves;
};

struct PathResult {
    SystemState terminal;
    std::vector<DefaultEvent> defaults;
    bool mean_hit = false;   // empirical mean of live banks touched the default level
    std::vector<RecordedPoint> recorded;  // decimated, only when recording was requested
};

// Interaction drift at (state, t); one entry per live bank, aligned with
// state.ids order.
std::vector<double> drift(const ModelSpec& spec, const SystemState& state, double t);

struct SimulateOptions {
    bool record = false;
    std::size_t max_recorded_points = 2000;
};

// Walks the system across the grid: explicit update per step, then removal of
// any bank at or under the default level, timestamped at the grid point where
// it was seen. The initial state is screened the same way before stepping.
PathResult simulate_path(const ModelSpec& spec, const SystemState& start,
                         const TimeGrid& grid, const NoiseBlock& noise,
                         const SimulateOptions& options = {});

// Per-step tables shared by every path of an ensemble (rate/target lookups
// hoisted out of the hot loop).
struct StepTable {
    std::vector<double> sigma;
    std::vector<double> alpha;
    std::vector<double> gamma;
    std::vector<double> target_lower;
    std::vector<double> target_upper_slope;
};

StepTable build_step_table(const ModelSpec& spec, const TimeGrid& grid);

PathResult simulate_path_with_table(const ModelSpec& spec, const StepTable& table,
                                    const SystemState& start, const TimeGrid& grid,
                                    const NoiseBlock& noise,
                                    const SimulateOptions& options = {});

} // namespace banksim
