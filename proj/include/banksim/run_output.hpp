#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "banksim/config.hpp"
#include "banksim/control.hpp"
#include "banksim/governance.hpp"
#include "banksim/mean_field.hpp"
#include "banksim/model.hpp"
#include "banksim/risk.hpp"

namespace banksim {

// All writers create one CSV under dir, return its file name, and raise
// io_error when the file cannot be produced. Numbers carry 17 significant
// digits so a reader round-trips the exact doubles.
std::string format17(double x);

struct PathRecord {
    std::size_t path = 0;
    std::uint32_t n_defaults = 0;
    bool mean_hit = false;
    std::size_t terminal_live = 0;
    std::optional<double> terminal_mean;
    std::vector<DefaultEvent> defaults;
};

std::string write_paths_csv(const std::string& dir, const std::vector<PathRecord>& paths);
std::string write_defaults_csv(const std::string& dir, const std::vector<PathRecord>& paths);
std::string write_trajectories_csv(const std::string& dir,
                                   const std::vector<std::pair<std::size_t, std::vector<RecordedPoint>>>& recorded);
std::string write_loss_distribution_csv(const std::string& dir, const LossDistribution& dist);
std::string write_risk_estimates_csv(const std::string& dir,
                                     const std::vector<RiskEstimate>& estimates);
std::string write_riccati_csv(const std::string& dir, const RiccatiSolution& sol);
std::string write_control_law_csv(const std::string& dir, const ControlLaw& law);
std::string write_meanfield_csv(const std::string& dir, const MeanFieldPath& path,
                                bool has_mean_column);
std::string write_series_csv(const std::string& dir, const std::vector<SeriesPoint>& series);
std::string write_quarters_csv(const std::string& dir,
                               const std::vector<GovernanceRecord>& quarters);
std::string write_candidates_csv(const std::string& dir,
                                 const std::vector<GovernanceRecord>& quarters,
                                 const GovernanceConfig& cfg);
std::string write_realized_csv(const std::string& dir,
                               const std::vector<RecordedPoint>& recorded);
std::string write_experiment_summary(const std::string& dir, const ExperimentResult& result);

std::string write_manifest(const std::string& dir, const std::string& command,
                           const RunConfig& cfg, const std::vector<std::string>& outputs,
                           double wall_seconds);

} // namespace banksim
