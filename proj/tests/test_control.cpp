#include <doctest.h>

#include <cmath>
#include <vector>

#include "banksim/control.hpp"
#include "banksim/errors.hpp"
#include "banksim/mean_field.hpp"
#include "banksim/noise.hpp"
#include "test_util.hpp"

using namespace banksim;

namespace {

ControlProblem flat_problem(double lambda, double t0, double t1, double level,
                            double eps, double sigma) {
    ControlProblem p;
    p.lambda = lambda;
    p.t_start = t0;
    p.t_end = t1;
    p.targets = make_perturbed(TargetTrajectory::constant(t0, t1, level), eps);
    p.sigma = sigma;
    return p;
}

} // namespace

TEST_CASE("minimized hamiltonian") {
    // min over beta of (beta p + lambda beta^2) at beta* = -p/(2 lambda)
    CHECK(hamiltonian(2.0, 0.001) == doctest::Approx(-1000.0));
    CHECK(hamiltonian(0.0, 1.0) == 0.0);
    // brute-force the minimum on a beta grid
    const double p = 0.8, lambda = 0.05;
    double best = 1e300;
    for (double beta = -20.0; beta <= 20.0; beta += 1e-4)
        best = std::min(best, beta * p + lambda * beta * beta);
    CHECK(hamiltonian(p, lambda) == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("quadratic coefficient matches its closed form") {
    // with a flat target, c solves c' = c^2/lambda - 1, c(T) = 0:
    // c(t) = sqrt(lambda) * tanh((T - t)/sqrt(lambda))
    for (double lambda : {0.001, 0.01, 1.0}) {
        const auto problem = flat_problem(lambda, 0.0, 1.0, 0.0, 0.1, 1.0);
        const auto sol = solve_riccati(problem, 1e-4);
        double worst = 0.0;
        const double root = std::sqrt(lambda);
        for (double t : {0.0, 0.1, 0.37, 0.5, 0.77, 0.9, 0.95, 0.99, 1.0}) {
            const double exact = root * std::tanh((1.0 - t) / root);
            worst = std::max(worst, std::fabs(sol.interp_c(t) - exact));
        }
        CAPTURE(lambda);
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("zero target kills the linear coefficient") {
    const auto problem = flat_problem(0.001, 0.0, 1.0, 0.0, 0.1, 1.0);
    const auto sol = solve_riccati(problem, 1e-4);
    for (double v : sol.b) CHECK(std::fabs(v) <= 1e-12);
}

TEST_CASE("coarse solver step is refused for stiff horizons") {
    const auto problem = flat_problem(0.001, 0.0, 1.0, 0.0, 0.1, 1.0);
    // sqrt(0.001)/10 ~ 3.16e-3: 1e-2 under-resolves the terminal layer
    CHECK_THROWS_AS(solve_riccati(problem, 1e-2), config_error);
    CHECK_NOTHROW(solve_riccati(problem, 2e-3));
}

TEST_CASE("value function satisfies its own backward equation") {
    // V_t + H(V_z) + (sigma^2/2) V_zz + (z - xi)^2 = 0 with V quadratic.
    // V_t is taken from centered differences of the solved node values, so a
    // sign slip or a broken integrator shows up as a nonzero residual.
    const double lambda = 0.01, sigma = 0.7;
    ControlProblem problem;
    problem.lambda = lambda;
    problem.t_start = 0.0;
    problem.t_end = 1.0;
    problem.targets = make_perturbed(
        TargetTrajectory::sinusoid(0.0, 1.0, 0.3, 5.0, 0.2, 1.0), 0.1);
    problem.sigma = sigma;
    const double h = 1e-4;
    const auto sol = solve_riccati(problem, h);
    REQUIRE(sol.c.size() == 10001);

    double worst = 0.0;
    for (std::size_t i : {500u, 2500u, 5000u, 7500u, 9990u}) {
        const double t = sol.t_start + double(i) * h;
        const double xi = problem.targets.base.value(t);
        const double a_t = (sol.a[i + 1] - sol.a[i - 1]) / (2.0 * h);
        const double b_t = (sol.b[i + 1] - sol.b[i - 1]) / (2.0 * h);
        const double c_t = (sol.c[i + 1] - sol.c[i - 1]) / (2.0 * h);
        for (double z : {-1.0, 0.0, 0.4, 2.0}) {
            const double v_t = a_t + b_t * z + c_t * z * z;
            const double v_z = sol.b[i] + 2.0 * sol.c[i] * z;
            const double residual = v_t + hamiltonian(v_z, lambda)
                                  + 0.5 * sigma * sigma * (2.0 * sol.c[i])
                                  + (z - xi) * (z - xi);
            worst = std::max(worst, std::fabs(residual));
        }
    }
    // the centered difference itself is O(h^2) against third derivatives that
    // reach ~1/lambda near t_end, hence the slack relative to the solver error
    CHECK(worst <= 5e-6);
}

TEST_CASE("the feedback rule tracks better than doing nothing") {
    const double lambda = 0.01, sigma = 0.5;
    const auto problem = flat_problem(lambda, 0.0, 1.0, 0.0, 0.1, sigma);
    const auto sol = solve_riccati(problem, 1e-4);
    const TimeGrid grid = make_grid(0.0, 1.0, 1e-3);

    double cost_controlled = 0.0, cost_idle = 0.0;
    for (std::size_t p = 0; p < 200; ++p) {
        const auto noise = sample_noise(grid, 1, 1212, p);
        double z_ctl = 1.0, z_idle = 1.0;
        for (std::size_t k = 0; k < grid.n_steps; ++k) {
            const double t = grid.time(k);
            const double beta = optimal_beta(sol, t, z_ctl);
            z_ctl += beta * grid.dt + sigma * noise.row(k)[0];
            z_idle += sigma * noise.row(k)[0];
            cost_controlled += z_ctl * z_ctl * grid.dt;
            cost_idle += z_idle * z_idle * grid.dt;
        }
    }
    CHECK(cost_controlled < 0.25 * cost_idle);
}

TEST_CASE("recovered rates have the right signs and starting magnitudes") {
    // flat zero target, lambda = 0.001: alpha(0) = c(0)/lambda ~ sqrt(1/lambda),
    // gamma(0) = -c(0)/(2 lambda) with b = 0
    const double lambda = 0.001, eps = 0.1;
    const auto problem = flat_problem(lambda, 0.0, 1.0, 0.0, eps, 1.0);
    const auto sol = solve_riccati(problem, 1e-4);
    const TimeGrid grid = make_grid(0.0, 1.0, 1e-3);
    const auto law = derive_control_law(sol, problem.targets, grid);

    REQUIRE(law.alpha.size() == grid.n_steps + 1);
    for (std::size_t k = 0; k <= grid.n_steps; ++k) {
        CHECK(law.alpha[k] >= 0.0);
        CHECK(law.gamma[k] <= 0.0);
    }
    // c(0) ~ sqrt(lambda) tanh(1/sqrt(lambda)) = sqrt(lambda) up to 1e-27
    CHECK(law.alpha.front() == doctest::Approx(31.6227766).epsilon(1e-6));
    // xbar(0) = upper(0) = eps, lower = -eps, gap u = 2 eps:
    // gamma(0) = -(c/lambda) * xbar / u = -alpha(0)/2
    CHECK(law.gamma.front() == doctest::Approx(-15.8113883).epsilon(1e-5));
    CHECK(law.alpha_at(grid.time(500)) == law.alpha[500]);
    CHECK(law.gamma_at(grid.time(777)) == law.gamma[777]);
}

TEST_CASE("law derivation needs an open band") {
    // a closed band has no gap to divide by
    const auto degenerate = flat_problem(0.001, 0.0, 1.0, 0.0, 0.0, 1.0);
    CHECK_THROWS_AS(derive_control_law(solve_riccati(degenerate, 1e-4),
                                       degenerate.targets, make_grid(0.0, 1.0, 1e-3)),
                    config_error);
    // a hair-thin band trips the gap floor on the first step
    const auto thin = flat_problem(0.001, 0.0, 1.0, 0.0, 1e-7, 1.0);
    CHECK_THROWS_AS(derive_control_law(solve_riccati(thin, 1e-4),
                                       thin.targets, make_grid(0.0, 1.0, 1e-3)),
                    singular_denominator_error);
}

TEST_CASE("a target outrunning the wind-down collapses the gap") {
    // near the end of the horizon the value function flattens and the support
    // cannot hold the mean against a steep ramp: the gap dives through zero
    ControlProblem problem;
    problem.lambda = 0.001;
    problem.t_start = 0.0;
    problem.t_end = 1.0;
    problem.targets = make_perturbed(TargetTrajectory::linear(0.0, 1.0, 20.0, 0.0), 0.1);
    problem.sigma = 1.0;
    const auto sol = solve_riccati(problem, 1e-4);
    CHECK_THROWS_AS(derive_control_law(sol, problem.targets, make_grid(0.0, 1.0, 1e-3)),
                    singular_denominator_error);
}

TEST_CASE("law on a sub-window of the horizon is accepted") {
    const auto problem = flat_problem(0.01, 0.0, 1.0, 1.0, 0.1, 1.0);
    const auto sol = solve_riccati(problem, 1e-4);
    const TimeGrid grid = make_grid(0.0, 0.25, 1e-3);
    CHECK_NOTHROW(derive_control_law(sol, problem.targets, grid));
    // but a grid poking past the horizon is refused
    const TimeGrid wide = make_grid(0.5, 1.5, 1e-3);
    CHECK_THROWS_AS(derive_control_law(sol, problem.targets, wide), config_error);
}
