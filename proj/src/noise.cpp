#include "banksim/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "banksim/errors.hpp"

namespace banksim {
namespace philox {

namespace {
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline double uniform53(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    // (0, 1]: keeps log() finite below.
    return 1.0 - static_cast<double>(bits >> 11) * 0x1.0p-53;
}
} // namespace

std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                   std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * counter[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * counter[2];
        counter = {static_cast<std::uint32_t>(p1 >> 32) ^ counter[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ counter[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return counter;
}

std::array<double, 2> normal_pair(std::uint64_t seed, std::uint64_t path_index,
                                  std::uint32_t bank, std::uint32_t pair_index) {
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                             static_cast<std::uint32_t>(seed >> 32)};
    const std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(path_index),
                                              static_cast<std::uint32_t>(path_index >> 32),
                                              bank, pair_index};
    const auto r = block(ctr, key);
    const double u1 = uniform53(r[0], r[1]);
    const double u2 = uniform53(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 finalizer over the combined words
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace philox

void sample_noise_into(NoiseBlock& block, const TimeGrid& grid, std::size_t n_banks,
                       std::uint64_t seed, std::uint64_t path_index) {
    if (n_banks == 0)
        throw config_error("sample_noise: need at least one bank column");
    block.seed = seed;
    block.path_index = path_index;
    block.n_steps = grid.n_steps;
    block.n_banks = n_banks;
    block.increments.resize(grid.n_steps * n_banks);
    const double scale = std::sqrt(grid.dt);
    const std::size_t n_pairs = (grid.n_steps + 1) / 2;
    for (std::size_t b = 0; b < n_banks; ++b) {
        for (std::size_t k = 0; k < n_pairs; ++k) {
            const auto z = philox::normal_pair(seed, path_index,
                                               static_cast<std::uint32_t>(b),
                                               static_cast<std::uint32_t>(k));
            const std::size_t s0 = 2 * k;
            block.increments[s0 * n_banks + b] = z[0] * scale;
            if (s0 + 1 < grid.n_steps)
                block.increments[(s0 + 1) * n_banks + b] = z[1] * scale;
        }
    }
}

NoiseBlock sample_noise(const TimeGrid& grid, std::size_t n_banks,
                        std::uint64_t seed, std::uint64_t path_index) {
    NoiseBlock block;
    sample_noise_into(block, grid, n_banks, seed, path_index);
    return block;
}

void euler_step(std::span<double> state, std::span<const double> drift,
                double sigma, std::span<const double> dw, double dt) {
    if (state.size() != drift.size() || state.size() != dw.size())
        throw std::logic_error("euler_step: mismatched spans");
    for (std::size_t i = 0; i < state.size(); ++i)
        state[i] += drift[i] * dt + sigma * dw[i];
}

} // namespace banksim
