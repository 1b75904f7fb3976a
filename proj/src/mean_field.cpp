#include "banksim/mean_field.hpp"

#include <functional>
#include <stdexcept>

#include "banksim/errors.hpp"

namespace banksim {

std::vector<double> simulate_meanfield_ou(double alpha, double sigma, double y0,
                                          const TimeGrid& grid, const NoiseBlock& noise) {
    if (noise.n_steps < grid.n_steps || noise.n_banks < 1)
        throw std::logic_error("meanfield: noise block smaller than the run");
    std::vector<double> path(grid.n_points());
    double y = y0;
    path[0] = y;
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        y += -alpha * y * grid.dt + sigma * noise.row(k)[0];
        path[k + 1] = y;
    }
    return path;
}

MeanFieldPath simulate_meanfield_two(const PerturbedTargets& targets,
                                     const std::function<double(double)>& alpha_fn,
                                     const std::function<double(double)>& gamma_fn,
                                     const VolSchedule& vol,
                                     const TimeGrid& grid, const NoiseBlock& noise) {
    if (!alpha_fn || !gamma_fn)
        throw config_error("meanfield: both rate functions are required");
    if (noise.n_steps < grid.n_steps || noise.n_banks < 1)
        throw std::logic_error("meanfield: noise block smaller than the run");

    MeanFieldPath out;
    out.t.resize(grid.n_points());
    out.x.resize(grid.n_points());
    out.xbar.resize(grid.n_points());

    double u = 2.0 * targets.epsilon;  // xbar - lower
    double x = targets.upper(grid.t0);
    out.t[0] = grid.t0;
    out.x[0] = x;
    out.xbar[0] = targets.lower(grid.t0) + u;

    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        const double t = grid.time(k);
        const double alpha = alpha_fn(t);
        const double gamma = gamma_fn(t);
        const double sigma = vol.value(t);
        const double xbar = targets.lower(t) + u;
        const double slope = targets.upper_derivative(t);
        x += (alpha * (xbar - x) + gamma * u + slope) * grid.dt + sigma * noise.row(k)[0];
        u *= 1.0 + gamma * grid.dt;
        const double t_next = grid.time(k + 1);
        out.t[k + 1] = t_next;
        out.x[k + 1] = x;
        out.xbar[k + 1] = targets.lower(t_next) + u;
    }
    return out;
}

} // namespace banksim
