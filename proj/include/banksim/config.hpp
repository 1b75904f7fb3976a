#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "banksim/governance.hpp"
#include "banksim/model.hpp"
#include "banksim/vol_schedule.hpp"

namespace banksim {

// Flat run configuration shared by every subcommand. Defaults reproduce the
// reference governed experiment (ten banks, resting target 1, band
// [0.03, 0.05], unit volatility).
struct RunConfig {
    // system
    std::string family = "supported";
    std::size_t n_banks = 10;
    double alpha = 20.0;   // constant rates for directly configured systems
    double gamma = -1.0;
    std::vector<VolSchedule::Point> vol = {{0.0, 1.0}};
    double default_level = 0.3;
    // target descriptor
    std::string xi_kind = "constant";  // constant | linear | sinusoid
    double xi_value = 1.0;             // level / value at t0
    double xi_slope = 0.0;
    double xi_amplitude = 0.0;
    double xi_omega = 0.0;
    double xi_phase = 0.0;
    double xi_offset = 0.0;
    double epsilon = 0.1;
    // horizon and discretization
    double t0 = 0.0;
    double t1 = 1.0;
    double dt = 1e-4;
    double dt_ode = 1e-4;
    // sampling
    std::size_t n_paths = 10000;
    std::uint64_t seed = 12345;
    unsigned threads = 0;
    // governance
    double t2 = 3.0;
    double dtau = 0.25;
    double lookahead = 1.0;
    double s1 = 0.03;
    double s2 = 0.05;
    double lambda = 0.001;
    double xi0 = 1.0;
    int menu_steps = 8;
    double baseline_alpha = 20.0;
    double baseline_gamma = -1.0;
    // output
    std::string out_dir;
    bool quick = false;
    bool ungoverned = false;
    std::size_t record_points = 2000;
    std::size_t record_paths = 1;
};

// Parses "key = value" lines ('#' comments, blank lines ignored). Unknown
// keys, malformed values and violated constraints raise config_error with the
// key named.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);
void apply_override(RunConfig& cfg, const std::string& key_equals_value);
void validate_run_config(const RunConfig& cfg);

// --quick trades resolution for speed: 2000 paths at dt = 1e-3.
void apply_quick(RunConfig& cfg);

// Deterministic serialization of every setting, and a 64-bit FNV-1a digest of
// it; both go into the run manifest.
std::map<std::string, std::string> config_entries(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

TargetTrajectory target_from_config(const RunConfig& cfg, double t0, double t1);
VolSchedule schedule_from_config(const RunConfig& cfg);
ModelSpec model_from_config(const RunConfig& cfg);
GovernanceConfig governance_from_config(const RunConfig& cfg);

} // namespace banksim
