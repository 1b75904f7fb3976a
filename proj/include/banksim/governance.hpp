#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "banksim/control.hpp"
#include "banksim/model.hpp"
#include "banksim/risk.hpp"
#include "banksim/trajectory.hpp"
#include "banksim/vol_schedule.hpp"

namespace banksim {

struct GovernanceConfig {
    std::size_t n_banks = 10;
    double xi0 = 1.0;            // resting target level
    double epsilon = 0.1;
    double lambda = 0.001;
    double s1 = 0.03;            // acceptable risk band [s1, s2]
    double s2 = 0.05;
    double default_level = 0.3;
    double t_start = 0.0;
    double t_end = 3.0;
    double dtau = 0.25;          // decision spacing
    double lookahead = 1.0;      // risk evaluation horizon per decision
    int menu_steps = 8;          // ramp slopes n/menu_steps, n in [-menu_steps, menu_steps]
    double dt_sim = 1e-4;
    double dt_ode = 1e-4;
    std::size_t n_paths = 10000;
    std::uint64_t seed = 12345;
    unsigned threads = 0;
    VolSchedule vol;             // realized volatility; decisions only see its
                                 // value at the decision time
    double baseline_alpha = 20.0;  // fixed-parameter reference system
    double baseline_gamma = -1.0;
    std::size_t record_points = 2000;  // realized-trajectory budget, whole run
};

// Throws config_error naming the violated constraint.
void validate_config(const GovernanceConfig& cfg);
std::size_t decision_count(const GovernanceConfig& cfg);

struct CandidateTrajectory {
    int n = 0;                   // ramp index; slope is n/menu_steps per year
    TargetTrajectory trajectory; // defined on [tau1, tau1 + lookahead]
    bool feasible = true;        // stays strictly above the default level
};

// 2*menu_steps + 1 candidates ordered by n. Each ramps from the anchor for one
// decision interval and then holds the reached level.
std::vector<CandidateTrajectory> build_menu(double xi_anchor, double tau1,
                                            const GovernanceConfig& cfg);

struct CandidateEvaluation {
    int n = 0;
    bool feasible = true;
    RiskEstimate estimate;
    std::shared_ptr<const ControlLaw> law;
};

// Derives the rate law for the candidate and prices next-horizon systemic risk
// from the given state, with the volatility frozen at its state.t value.
CandidateEvaluation evaluate_candidate(const CandidateTrajectory& candidate,
                                       const SystemState& state,
                                       const GovernanceConfig& cfg,
                                       std::uint64_t seed);

struct GovernanceRecord {
    std::size_t quarter = 0;
    double tau1 = 0.0;
    double xi_anchor = 0.0;
    std::vector<CandidateEvaluation> evaluations;  // in walk order
    int chosen_n = 0;
    RiskEstimate chosen_estimate;
    std::shared_ptr<const ControlLaw> chosen_law;
    CandidateTrajectory chosen_candidate;
    bool fallback = false;  // no candidate hit the band; nearest one was taken
};

// One decision: evaluate the hold candidate, walk the menu away from it in the
// direction the estimate demands, stop at the first candidate whose point
// estimate lies in [s1, s2]. Infeasible candidates are skipped. If the walk
// exhausts the menu, picks the evaluated feasible candidate closest to the
// band and sets the fallback flag.
GovernanceRecord govern_quarter(const SystemState& state, double xi_anchor,
                                const GovernanceConfig& cfg, std::size_t quarter);

struct SeriesPoint {
    std::size_t quarter = 0;
    double tau1 = 0.0;
    double probability = 0.0;
    double std_error = 0.0;
    std::optional<int> chosen_n;
    bool fallback = false;
};

struct ExperimentResult {
    bool governed = true;
    std::vector<GovernanceRecord> quarters;  // empty for the reference run
    std::vector<SeriesPoint> series;
    std::vector<RecordedPoint> realized;
    SystemState final_state;
};

// Full run over [t_start, t_end]. Governed mode re-decides every dtau and
// evolves one realized system path under the chosen law between decisions
// (through the full remaining horizon after the last one). The reference mode
// keeps the resting target and fixed baseline rates throughout and only
// prices the same risk at each decision time.
ExperimentResult run_experiment(const GovernanceConfig& cfg, bool governed);

} // namespace banksim
