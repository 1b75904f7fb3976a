#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <span>
#include <vector>

#include "banksim/time_grid.hpp"

namespace banksim {

// Counter-based generator (Philox 4x32, 10 rounds). Every draw is a pure
// function of (seed, counter), so a path's noise is identical no matter how
// many worker threads ran it or in which order paths were scheduled.
namespace philox {

std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                   std::array<std::uint32_t, 2> key);

// Two independent N(0,1) draws for a given (seed, path, bank, pair) address.
// Consecutive step indices 2k and 2k+1 share the pair k (Box-Muller).
std::array<double, 2> normal_pair(std::uint64_t seed, std::uint64_t path_index,
                                  std::uint32_t bank, std::uint32_t pair_index);

// Cheap stateless integer hash for deriving sub-stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

} // namespace philox

// Materialized Brownian increments for one path: n_steps rows, n_banks
// columns, row-major. increments[k*n_banks + b] ~ N(0, dt).
struct NoiseBlock {
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;
    std::size_t n_steps = 0;
    std::size_t n_banks = 0;
    std::vector<double> increments;

    const double* row(std::size_t k) const { return increments.data() + k * n_banks; }
};

NoiseBlock sample_noise(const TimeGrid& grid, std::size_t n_banks,
                        std::uint64_t seed, std::uint64_t path_index);

// Same, reusing the block's storage (hot loops materialize one block per path).
void sample_noise_into(NoiseBlock& block, const TimeGrid& grid, std::size_t n_banks,
                       std::uint64_t seed, std::uint64_t path_index);

// In-place explicit update x += drift*dt + sigma*dW. Sizes must agree.
void euler_step(std::span<double> state, std::span<const double> drift,
                double sigma, std::span<const double> dw, double dt);

} // namespace banksim
