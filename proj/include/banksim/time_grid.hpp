#pragma once

#include <cstddef>

namespace banksim {

// Uniform grid on [t0, t1]. Points are always computed as t0 + k*dt (one
// multiply, no running sum) so that time(k) is reproducible no matter who
// asks for it or in what order.
struct TimeGrid {
    double t0 = 0.0;
    double t1 = 0.0;
    double dt = 0.0;
    std::size_t n_steps = 0;

    double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
    std::size_t n_points() const { return n_steps + 1; }
};

// Throws config_error on non-finite / non-positive dt, t1 <= t0, or a dt that
// does not divide the interval (within 1e-6 of a whole number of steps).
TimeGrid make_grid(double t0, double t1, double dt);

} // namespace banksim
