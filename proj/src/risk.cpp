#include "banksim/risk.hpp"

#include <cmath>
#include <stdexcept>

#include "banksim/errors.hpp"
#include "banksim/parallel.hpp"

namespace banksim {

std::size_t systemic_threshold(std::size_t n_banks) {
    return n_banks / 2 + 1;
}

std::vector<PathSummary> simulate_ensemble(const ModelSpec& spec, const SystemState& start,
                                           const TimeGrid& grid, std::size_t n_paths,
                                           std::uint64_t seed, unsigned threads) {
    if (n_paths == 0)
        throw config_error("ensemble: n_paths must be positive");
    validate_spec(spec, grid);
    const StepTable table = build_step_table(spec, grid);
    std::vector<PathSummary> summaries(n_paths);
    const unsigned workers = resolve_threads(threads);
    std::vector<NoiseBlock> scratch(std::min<std::size_t>(workers, n_paths));
    parallel_for(n_paths, threads, [&](unsigned worker, std::size_t p) {
        NoiseBlock& noise = scratch[worker];
        sample_noise_into(noise, grid, spec.n_banks, seed, p);
        const PathResult res = simulate_path_with_table(spec, table, start, grid, noise);
        summaries[p] = PathSummary{static_cast<std::uint32_t>(res.defaults.size()),
                                   res.mean_hit};
    });
    return summaries;
}

double LossDistribution::probability(std::size_t k) const {
    if (k >= counts.size()) return 0.0;
    return static_cast<double>(counts[k]) / static_cast<double>(n_paths);
}

double LossDistribution::tail_probability(std::size_t k_min) const {
    std::uint64_t acc = 0;
    for (std::size_t k = k_min; k < counts.size(); ++k) acc += counts[k];
    return static_cast<double>(acc) / static_cast<double>(n_paths);
}

LossDistribution make_loss_distribution(const std::vector<PathSummary>& summaries,
                                        std::size_t n_banks) {
    LossDistribution dist;
    dist.counts.assign(n_banks + 1, 0);
    dist.n_paths = summaries.size();
    for (const auto& s : summaries) {
        if (s.n_defaults >= dist.counts.size())
            throw std::logic_error("loss distribution: more defaults than banks");
        ++dist.counts[s.n_defaults];
    }
    return dist;
}

RiskEstimate estimate_from_summaries(const std::vector<PathSummary>& summaries,
                                     std::size_t n_banks, SystemicDefinition definition) {
    RiskEstimate est;
    est.definition = definition;
    est.n_paths = summaries.size();
    std::uint64_t hits = 0;
    if (definition == SystemicDefinition::majority_defaults) {
        est.threshold = systemic_threshold(n_banks);
        for (const auto& s : summaries)
            if (s.n_defaults >= est.threshold) ++hits;
    } else {
        for (const auto& s : summaries)
            if (s.mean_hit) ++hits;
    }
    const double n = static_cast<double>(summaries.size());
    est.probability = static_cast<double>(hits) / n;
    est.std_error = std::sqrt(est.probability * (1.0 - est.probability) / n);
    return est;
}

LossDistribution estimate_loss_distribution(const ModelSpec& spec, const SystemState& start,
                                            const TimeGrid& grid, std::size_t n_paths,
                                            std::uint64_t seed, unsigned threads) {
    const auto summaries = simulate_ensemble(spec, start, grid, n_paths, seed, threads);
    return make_loss_distribution(summaries, spec.n_banks);
}

RiskEstimate systemic_risk_probability(const ModelSpec& spec, const SystemState& start,
                                       const TimeGrid& grid, std::size_t n_paths,
                                       std::uint64_t seed, unsigned threads,
                                       SystemicDefinition definition) {
    const auto summaries = simulate_ensemble(spec, start, grid, n_paths, seed, threads);
    return estimate_from_summaries(summaries, start.active_count(), definition);
}

} // namespace banksim
