#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "banksim/mean_field.hpp"
#include "banksim/model.hpp"
#include "banksim/noise.hpp"
#include "test_util.hpp"

using namespace banksim;
using namespace testutil;

namespace {

NoiseBlock zero_noise(const TimeGrid& grid, std::size_t banks) {
    NoiseBlock block;
    block.n_steps = grid.n_steps;
    block.n_banks = banks;
    block.increments.assign(grid.n_steps * banks, 0.0);
    return block;
}

} // namespace

TEST_CASE("limit process decays at its reversion rate") {
    const TimeGrid grid = make_grid(0.0, 1.0, 1e-4);
    const auto path = simulate_meanfield_ou(1.0, 1.0, 1.0, grid, zero_noise(grid, 1));
    REQUIRE(path.size() == grid.n_steps + 1);
    CHECK(path.back() == doctest::Approx(std::exp(-1.0)).epsilon(1e-3));
}

TEST_CASE("limit process variance matches the stationary ramp-up") {
    // Var Y_T = sigma^2 (1 - e^{-2 alpha T}) / (2 alpha)
    const TimeGrid grid = make_grid(0.0, 1.0, 1e-3);
    const double alpha = 2.0, sigma = 1.5;
    std::vector<double> terminal;
    for (std::size_t p = 0; p < 4000; ++p) {
        const auto noise = sample_noise(grid, 1, 808, p);
        terminal.push_back(simulate_meanfield_ou(alpha, sigma, 0.0, grid, noise).back());
    }
    const double expect = sigma * sigma * (1.0 - std::exp(-2.0 * alpha)) / (2.0 * alpha);
    CHECK(sample_variance(terminal) == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("zero band width nails the mean to the target, whatever gamma does") {
    const TimeGrid grid = make_grid(0.0, 1.0, 1e-3);
    auto targets = make_perturbed(
        TargetTrajectory::sinusoid(0.0, 1.0, 0.5, 4.0, 0.3, 2.0), 0.0);
    const auto noise = sample_noise(grid, 1, 61, 0);
    const auto alpha = [](double) { return 10.0; };

    const auto a = simulate_meanfield_two(targets, alpha, [](double) { return -1.0; },
                                          constant_vol(0.0, 1.0), grid, noise);
    const auto b = simulate_meanfield_two(targets, alpha,
                                          [](double t) { return -50.0 * (1.0 + t); },
                                          constant_vol(0.0, 1.0), grid, noise);
    REQUIRE(a.x.size() == grid.n_steps + 1);
    for (std::size_t k = 0; k <= grid.n_steps; ++k) {
        CHECK(std::fabs(a.xbar[k] - targets.base.value(grid.time(k))) < 1e-10);
        // the support rate multiplies a zero offset: the bank path cannot
        // depend on it, bit for bit
        CHECK(a.x[k] == b.x[k]);
        CHECK(a.xbar[k] == b.xbar[k]);
    }
}

TEST_CASE("constant support rate contracts the mean gap in closed form") {
    // flat target: xbar(t) - xi = 2*eps*e^{gamma t} - eps, so
    // xbar(T) - upper(T) = 2*eps*(e^{gamma T} - 1)
    const TimeGrid grid = make_grid(0.0, 1.0, 1e-4);
    const double eps = 0.1, gamma = -1.0;
    auto targets = make_perturbed(TargetTrajectory::constant(0.0, 1.0, 1.0), eps);
    const auto path = simulate_meanfield_two(targets, [](double) { return 1.0; },
                                             [=](double) { return gamma; },
                                             constant_vol(0.0, 1.0), grid,
                                             zero_noise(grid, 1));
    const double expect = 2.0 * eps * (std::exp(gamma) - 1.0);
    CHECK(expect == doctest::Approx(-0.12642411).epsilon(1e-6));
    CHECK(path.xbar.back() - targets.upper(1.0) ==
          doctest::Approx(expect).epsilon(10.0 * grid.dt));
}

TEST_CASE("large finite pack tracks the limit mean") {
    const TimeGrid grid = make_grid(0.0, 1.0, 1e-3);
    const double eps = 0.1;
    auto targets = make_perturbed(TargetTrajectory::constant(0.0, 1.0, 1.0), eps);
    const std::size_t n = 100;
    // barrier far out of reach: defaults are not what this test measures
    const auto spec = ModelSpec::supported(
        n, [](double) { return 20.0; }, [](double) { return -1.0; },
        constant_vol(0.0, 1.0), targets, -1e9);
    const auto start = initial_state(spec, 0.0);

    // ensemble average of the pack mean over independent packs
    const std::size_t reps = 40;
    double acc = 0.0;
    for (std::size_t p = 0; p < reps; ++p) {
        const auto noise = sample_noise(grid, n, 5555, p);
        const auto res = simulate_path(spec, start, grid, noise);
        REQUIRE(res.terminal.active_count() == n);
        acc += empirical_mean(res.terminal);
    }
    acc /= double(reps);

    const auto limit = simulate_meanfield_two(targets, [](double) { return 20.0; },
                                              [](double) { return -1.0; },
                                              constant_vol(0.0, 1.0), grid,
                                              zero_noise(grid, 1));
    // pack mean fluctuates around the limit with sd ~ sigma/sqrt(2 gamma ...)/sqrt(nN);
    // 3 standard errors of the crude bound sigma/sqrt(n*reps)
    const double se = 1.0 / std::sqrt(double(n * reps));
    CHECK(std::fabs(acc - limit.xbar.back()) < 3.0 * se);
}
