#include "banksim/time_grid.hpp"

#include <cmath>
#include <string>

#include "banksim/errors.hpp"

namespace banksim {

TimeGrid make_grid(double t0, double t1, double dt) {
    if (!std::isfinite(t0) || !std::isfinite(t1) || !std::isfinite(dt))
        throw config_error("make_grid: non-finite bounds or step");
    if (dt <= 0.0)
        throw config_error("make_grid: dt must be positive, got " + std::to_string(dt));
    if (t1 <= t0)
        throw config_error("make_grid: need t1 > t0");
    const double ratio = (t1 - t0) / dt;
    const auto n = static_cast<std::size_t>(std::llround(ratio));
    if (n < 1 || std::fabs(ratio - static_cast<double>(n)) > 1e-6)
        throw config_error("make_grid: dt does not divide [t0, t1]");
    return TimeGrid{t0, t1, dt, n};
}

} // namespace banksim
