#pragma once

#include <cstddef>
#include <vector>

#include "banksim/time_grid.hpp"
#include "banksim/trajectory.hpp"

namespace banksim {

// Finite-horizon tracking problem: steer a controlled diffusion to follow the
// target while paying lambda * beta^2 for the effort.
struct ControlProblem {
    double lambda = 0.0;          // effort penalty, > 0
    double t_start = 0.0;
    double t_end = 0.0;
    PerturbedTargets targets;     // control tracks the base target
    double sigma = 0.0;           // frozen diffusion level for the horizon
};

// Minimized Hamiltonian in the momentum variable.
double hamiltonian(double p, double lambda);

// Quadratic value-function coefficients V(t,z) = a + b z + c z^2 on a uniform
// grid over [t_start, t_end], all zero at t_end.
struct RiccatiSolution {
    double t_start = 0.0;
    double t_end = 0.0;
    double dt = 0.0;
    double lambda = 0.0;
    double sigma = 0.0;
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> c;

    double interp_a(double t) const;
    double interp_b(double t) const;
    double interp_c(double t) const;
};

// Backward RK4 at fixed step dt_ode. Requires dt_ode <= sqrt(lambda)/10 so the
// boundary layer near t_end is resolved.
RiccatiSolution solve_riccati(const ControlProblem& problem, double dt_ode);

double value_function(const RiccatiSolution& sol, double t, double z);
double optimal_beta(const RiccatiSolution& sol, double t, double z);

// Time-dependent system rates recovered from the value function, sampled on a
// simulation grid. alpha >= 0 and gamma <= 0 everywhere by construction.
struct ControlLaw {
    TimeGrid grid;
    double epsilon = 0.0;
    std::vector<double> alpha;
    std::vector<double> gamma;
    std::vector<double> xbar;   // induced population mean under the law
    std::vector<double> b;      // value-function samples, for inspection
    std::vector<double> c;

    double alpha_at(double t) const;
    double gamma_at(double t) const;

private:
    std::size_t index_of(double t) const;
};

// The support rate comes out of an implicit relation along the induced mean:
// each step evaluates the raw rate, clips it at zero, and advances the mean
// offset with the clipped value before the next step. Throws
// singular_denominator_error if the mean-to-lower-target gap falls under 1e-6.
ControlLaw derive_control_law(const RiccatiSolution& sol, const PerturbedTargets& targets,
                              const TimeGrid& grid);

} // namespace banksim
