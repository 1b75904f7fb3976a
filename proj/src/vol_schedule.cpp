#include "banksim/vol_schedule.hpp"

#include <cmath>
#include <string>

#include "banksim/errors.hpp"

namespace banksim {

double VolSchedule::value(double t) const {
    if (points.empty())
        throw state_error("vol schedule: empty");
    if (t < points.front().time - 1e-9)
        throw domain_error("vol schedule: t=" + std::to_string(t) + " before schedule start");
    double sigma = points.front().sigma;
    for (const auto& p : points) {
        if (t > p.time) sigma = p.sigma; else break;
    }
    return sigma;
}

VolSchedule make_schedule(std::vector<VolSchedule::Point> points) {
    if (points.empty())
        throw config_error("vol schedule: need at least one point");
    double prev = points.front().time;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!std::isfinite(p.time) || !std::isfinite(p.sigma))
            throw config_error("vol schedule: non-finite entry");
        if (!(p.sigma > 0.0))
            throw config_error("vol schedule: sigma must be positive, got " + std::to_string(p.sigma));
        if (i > 0 && !(p.time > prev))
            throw config_error("vol schedule: times must be strictly increasing");
        prev = p.time;
    }
    return VolSchedule{std::move(points)};
}

VolSchedule constant_vol(double t0, double sigma) {
    return make_schedule({{t0, sigma}});
}

} // namespace banksim
