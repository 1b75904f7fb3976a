#pragma once

#include <functional>
#include <vector>

#include "banksim/noise.hpp"
#include "banksim/time_grid.hpp"
#include "banksim/trajectory.hpp"
#include "banksim/vol_schedule.hpp"

namespace banksim {

// Large-population limit of the coupled family: dY = -alpha*Y dt + sigma dW.
// Uses the first noise column. Returns values at every grid point.
std::vector<double> simulate_meanfield_ou(double alpha, double sigma, double y0,
                                          const TimeGrid& grid, const NoiseBlock& noise);

struct MeanFieldPath {
    std::vector<double> t;
    std::vector<double> x;     // representative bank
    std::vector<double> xbar;  // deterministic population mean
};

// Limit system of the supported family. xbar follows
//   dxbar = gamma*(xbar - lower) dt + d(upper),
// and the representative bank adds mean reversion and noise. Both start at
// upper(t0). The mean is propagated through its offset u = xbar - lower
// (du = gamma*u dt exactly, u0 = 2*epsilon), so when epsilon = 0 the mean
// reproduces the target bit for bit and gamma cannot leak into x.
MeanFieldPath simulate_meanfield_two(const PerturbedTargets& targets,
                                     const std::function<double(double)>& alpha_fn,
                                     const std::function<double(double)>& gamma_fn,
                                     const VolSchedule& vol,
                                     const TimeGrid& grid, const NoiseBlock& noise);

} // namespace banksim
