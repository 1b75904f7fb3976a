#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "banksim/model.hpp"
#include "banksim/time_grid.hpp"

namespace banksim {

// Smallest count that is a strict majority of an n-bank system.
std::size_t systemic_threshold(std::size_t n_banks);

enum class SystemicDefinition {
    majority_defaults,  // at least systemic_threshold(N) removals over the window
    mean_barrier,       // empirical mean of live banks touches the default level
};

struct PathSummary {
    std::uint32_t n_defaults = 0;
    bool mean_hit = false;
};

// One summary per path, indexed by path. Path p draws its noise from
// (seed, path_index = p), so the ensemble is reproducible for a fixed seed
// whatever the thread count.
std::vector<PathSummary> simulate_ensemble(const ModelSpec& spec, const SystemState& start,
                                           const TimeGrid& grid, std::size_t n_paths,
                                           std::uint64_t seed, unsigned threads);

struct LossDistribution {
    std::vector<std::uint64_t> counts;  // index = number of defaulted banks, 0..N
    std::size_t n_paths = 0;

    double probability(std::size_t k) const;
    double tail_probability(std::size_t k_min) const;
};

struct RiskEstimate {
    SystemicDefinition definition = SystemicDefinition::majority_defaults;
    std::size_t threshold = 0;  // majority count used (majority_defaults only)
    double probability = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
};

LossDistribution make_loss_distribution(const std::vector<PathSummary>& summaries,
                                        std::size_t n_banks);

RiskEstimate estimate_from_summaries(const std::vector<PathSummary>& summaries,
                                     std::size_t n_banks, SystemicDefinition definition);

LossDistribution estimate_loss_distribution(const ModelSpec& spec, const SystemState& start,
                                            const TimeGrid& grid, std::size_t n_paths,
                                            std::uint64_t seed, unsigned threads);

RiskEstimate systemic_risk_probability(const ModelSpec& spec, const SystemState& start,
                                       const TimeGrid& grid, std::size_t n_paths,
                                       std::uint64_t seed, unsigned threads,
                                       SystemicDefinition definition);

} // namespace banksim
