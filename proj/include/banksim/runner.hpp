#pragma once

#include <string>
#include <vector>

#include "banksim/config.hpp"

namespace banksim::run {

// Output directory precedence: explicit config value, then $BANKSIM_OUT, then
// ./banksim_out. The directory is created if missing.
std::string resolve_out_dir(const RunConfig& cfg);

// Each subcommand simulates, drops its CSVs into the output directory and
// finishes with a manifest.json that pins down config, seed and hash.
// Returns the list of files written (manifest last).
std::vector<std::string> simulate(const RunConfig& cfg);
std::vector<std::string> loss_dist(const RunConfig& cfg);
std::vector<std::string> riccati(const RunConfig& cfg);
std::vector<std::string> meanfield(const RunConfig& cfg);
std::vector<std::string> govern(const RunConfig& cfg);

std::vector<std::string> dispatch(const std::string& command, const RunConfig& cfg);

} // namespace banksim::run
