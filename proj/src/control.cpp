#include "banksim/control.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "banksim/errors.hpp"
#include "banksim/time_grid.hpp"

namespace banksim {

double hamiltonian(double p, double lambda) {
    if (!(lambda > 0.0))
        throw config_error("hamiltonian: lambda must be positive");
    return -p * p / (4.0 * lambda);
}

namespace {

// d/dt (a, b, c) for the quadratic value function of the tracking problem:
//   a' = -sigma^2 c + b^2/(4 lambda) - xi^2
//   b' = b c / lambda + 2 xi
//   c' = c^2 / lambda - 1
std::array<double, 3> riccati_rhs(const std::array<double, 3>& s, double xi,
                                  double lambda, double sigma) {
    const double a = s[0], b = s[1], c = s[2];
    return {-sigma * sigma * c + b * b / (4.0 * lambda) - xi * xi,
            b * c / lambda + 2.0 * xi,
            c * c / lambda - 1.0};
}

double lerp_at(const std::vector<double>& v, double t, double t_start, double dt) {
    const double pos = (t - t_start) / dt;
    const auto n = v.size() - 1;
    if (pos <= 0.0) return v.front();
    if (pos >= static_cast<double>(n)) return v.back();
    const auto i = static_cast<std::size_t>(pos);
    const double w = pos - static_cast<double>(i);
    return v[i] * (1.0 - w) + v[i + 1] * w;
}

} // namespace

double RiccatiSolution::interp_a(double t) const { return lerp_at(a, t, t_start, dt); }
double RiccatiSolution::interp_b(double t) const { return lerp_at(b, t, t_start, dt); }
double RiccatiSolution::interp_c(double t) const { return lerp_at(c, t, t_start, dt); }

RiccatiSolution solve_riccati(const ControlProblem& problem, double dt_ode) {
    if (!(problem.lambda > 0.0) || !std::isfinite(problem.lambda))
        throw config_error("riccati: lambda must be positive");
    if (!(dt_ode > 0.0))
        throw config_error("riccati: dt_ode must be positive");
    if (dt_ode > std::sqrt(problem.lambda) / 10.0)
        throw config_error("riccati: step too large for lambda; need dt <= sqrt(lambda)/10");
    const TimeGrid grid = make_grid(problem.t_start, problem.t_end, dt_ode);

    RiccatiSolution sol;
    sol.t_start = problem.t_start;
    sol.t_end = problem.t_end;
    sol.dt = dt_ode;
    sol.lambda = problem.lambda;
    sol.sigma = problem.sigma;
    sol.a.assign(grid.n_points(), 0.0);
    sol.b.assign(grid.n_points(), 0.0);
    sol.c.assign(grid.n_points(), 0.0);

    const auto& base = problem.targets.base;
    const double lambda = problem.lambda;
    const double sigma = problem.sigma;
    std::array<double, 3> s{0.0, 0.0, 0.0};  // terminal data
    const double h = -dt_ode;
    for (std::size_t i = grid.n_steps; i > 0; --i) {
        const double t = grid.time(i);
        const double t_mid = t + 0.5 * h;
        const double t_next = grid.time(i - 1);
        const double xi0 = base.value(t);
        const double xi1 = base.value(t_mid);
        const double xi2 = base.value(t_next);
        const auto k1 = riccati_rhs(s, xi0, lambda, sigma);
        std::array<double, 3> s2, s3, s4;
        for (int j = 0; j < 3; ++j) s2[j] = s[j] + 0.5 * h * k1[j];
        const auto k2 = riccati_rhs(s2, xi1, lambda, sigma);
        for (int j = 0; j < 3; ++j) s3[j] = s[j] + 0.5 * h * k2[j];
        const auto k3 = riccati_rhs(s3, xi1, lambda, sigma);
        for (int j = 0; j < 3; ++j) s4[j] = s[j] + h * k3[j];
        const auto k4 = riccati_rhs(s4, xi2, lambda, sigma);
        for (int j = 0; j < 3; ++j)
            s[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        sol.a[i - 1] = s[0];
        sol.b[i - 1] = s[1];
        sol.c[i - 1] = s[2];
    }
    return sol;
}

double value_function(const RiccatiSolution& sol, double t, double z) {
    if (t < sol.t_start - 1e-9 || t > sol.t_end + 1e-9)
        throw domain_error("value_function: t outside the horizon");
    return sol.interp_a(t) + z * (sol.interp_b(t) + z * sol.interp_c(t));
}

double optimal_beta(const RiccatiSolution& sol, double t, double z) {
    if (t < sol.t_start - 1e-9 || t > sol.t_end + 1e-9)
        throw domain_error("optimal_beta: t outside the horizon");
    return -(sol.interp_b(t) + 2.0 * sol.interp_c(t) * z) / (2.0 * sol.lambda);
}

std::size_t ControlLaw::index_of(double t) const {
    const auto i = static_cast<std::ptrdiff_t>(std::llround((t - grid.t0) / grid.dt));
    if (i < 0 || static_cast<std::size_t>(i) > grid.n_steps)
        throw domain_error("control law: t=" + std::to_string(t) + " off the law grid");
    return static_cast<std::size_t>(i);
}

double ControlLaw::alpha_at(double t) const { return alpha[index_of(t)]; }
double ControlLaw::gamma_at(double t) const { return gamma[index_of(t)]; }

ControlLaw derive_control_law(const RiccatiSolution& sol, const PerturbedTargets& targets,
                              const TimeGrid& grid) {
    if (!(targets.epsilon > 0.0))
        throw config_error("control law: epsilon must be positive");
    if (grid.t0 < sol.t_start - 1e-9 || grid.t1 > sol.t_end + 1e-9)
        throw config_error("control law: grid leaves the solved horizon");

    ControlLaw law;
    law.grid = grid;
    law.epsilon = targets.epsilon;
    const std::size_t points = grid.n_points();
    law.alpha.resize(points);
    law.gamma.resize(points);
    law.xbar.resize(points);
    law.b.resize(points);
    law.c.resize(points);

    const double lambda = sol.lambda;
    double u = 2.0 * targets.epsilon;  // xbar - lower, exact at the start
    for (std::size_t k = 0; k < points; ++k) {
        const double t = grid.time(k);
        const double c = std::max(sol.interp_c(t), 0.0);
        const double b = sol.interp_b(t);
        // the gap is positive by construction; a sign flip means one clipped
        // step jumped across zero, which is just as fatal as a smooth collapse
        if (!(u > 1e-6))
            throw singular_denominator_error(
                "control law: mean-to-lower-target gap " + std::to_string(u) +
                " under 1e-6 at t=" + std::to_string(t));
        const double xbar = targets.lower(t) + u;
        const double raw = (-(c / lambda) * xbar - b / (2.0 * lambda) -
                            targets.upper_derivative(t)) / u;
        const double gamma = std::min(raw, 0.0);
        law.alpha[k] = c / lambda;
        law.gamma[k] = gamma;
        law.xbar[k] = xbar;
        law.b[k] = b;
        law.c[k] = c;
        if (k + 1 < points) u *= 1.0 + gamma * grid.dt;
    }
    return law;
}

} // namespace banksim
