#pragma once

#include <vector>

namespace banksim {

// Piecewise-constant volatility. Each entry opens a new regime at its time;
// a regime owns its right endpoint, so value(t) at a switch time is still the
// value in force before the switch.
struct VolSchedule {
    struct Point {
        double time = 0.0;
        double sigma = 0.0;
    };
    std::vector<Point> points;

    double value(double t) const;
};

// Validates ordering and positivity (config_error on violation).
VolSchedule make_schedule(std::vector<VolSchedule::Point> points);
VolSchedule constant_vol(double t0, double sigma);

} // namespace banksim
