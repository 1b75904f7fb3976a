#include "banksim/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "banksim/errors.hpp"

namespace banksim {

namespace {

constexpr double kSeamTol = 1e-9;

double segment_value(const TargetSegment& s, double t) {
    switch (s.kind) {
        case TargetSegment::Kind::constant: return s.value;
        case TargetSegment::Kind::linear: return s.value + s.slope * (t - s.t_begin);
        case TargetSegment::Kind::sinusoid:
            return s.offset + s.amplitude * std::sin(s.omega * t + s.phase);
    }
    return 0.0;
}

double segment_derivative(const TargetSegment& s, double t) {
    switch (s.kind) {
        case TargetSegment::Kind::constant: return 0.0;
        case TargetSegment::Kind::linear: return s.slope;
        case TargetSegment::Kind::sinusoid:
            return s.amplitude * s.omega * std::cos(s.omega * t + s.phase);
    }
    return 0.0;
}

double segment_min(const TargetSegment& s) {
    double m = std::min(segment_value(s, s.t_begin), segment_value(s, s.t_end));
    if (s.kind == TargetSegment::Kind::sinusoid && s.amplitude != 0.0 && s.omega != 0.0) {
        // interior stationary points sit where omega*t + phase = +/-pi/2 mod 2*pi
        const double pi = std::acos(-1.0);
        const double theta_a = s.omega * s.t_begin + s.phase;
        const double theta_b = s.omega * s.t_end + s.phase;
        const double theta_lo = std::min(theta_a, theta_b);
        const double theta_hi = std::max(theta_a, theta_b);
        for (const double angle : {-0.5 * pi, 0.5 * pi}) {
            const double k_lo = std::ceil((theta_lo - angle) / (2.0 * pi));
            const double k_hi = std::floor((theta_hi - angle) / (2.0 * pi));
            for (double k = k_lo; k <= k_hi; k += 1.0) {
                const double t = (angle + 2.0 * pi * k - s.phase) / s.omega;
                if (t >= s.t_begin && t <= s.t_end)
                    m = std::min(m, segment_value(s, t));
            }
        }
    }
    return m;
}

} // namespace

TargetTrajectory::TargetTrajectory(std::vector<TargetSegment> segments)
    : segs_(std::move(segments)) {
    if (segs_.empty())
        throw config_error("trajectory: no segments");
    for (const auto& s : segs_) {
        if (!(s.t_end > s.t_begin))
            throw config_error("trajectory: segment with non-positive length");
        if (!std::isfinite(segment_value(s, s.t_begin)) || !std::isfinite(segment_value(s, s.t_end)))
            throw config_error("trajectory: non-finite segment values");
    }
    for (std::size_t i = 1; i < segs_.size(); ++i) {
        if (std::fabs(segs_[i].t_begin - segs_[i - 1].t_end) > kSeamTol)
            throw config_error("trajectory: segments are not contiguous");
        const double left = segment_value(segs_[i - 1], segs_[i - 1].t_end);
        const double right = segment_value(segs_[i], segs_[i].t_begin);
        const double scale = std::max({1.0, std::fabs(left), std::fabs(right)});
        if (std::fabs(left - right) > 1e-9 * scale)
            throw config_error("trajectory: discontinuous at t=" + std::to_string(segs_[i].t_begin));
    }
}

TargetTrajectory TargetTrajectory::constant(double t0, double t1, double value) {
    TargetSegment s;
    s.kind = TargetSegment::Kind::constant;
    s.t_begin = t0;
    s.t_end = t1;
    s.value = value;
    return TargetTrajectory({s});
}

TargetTrajectory TargetTrajectory::linear(double t0, double t1, double slope,
                                          double value_at_start) {
    TargetSegment s;
    s.kind = TargetSegment::Kind::linear;
    s.t_begin = t0;
    s.t_end = t1;
    s.value = value_at_start;
    s.slope = slope;
    return TargetTrajectory({s});
}

TargetTrajectory TargetTrajectory::sinusoid(double t0, double t1, double amplitude,
                                            double omega, double phase, double offset) {
    TargetSegment s;
    s.kind = TargetSegment::Kind::sinusoid;
    s.t_begin = t0;
    s.t_end = t1;
    s.amplitude = amplitude;
    s.omega = omega;
    s.phase = phase;
    s.offset = offset;
    return TargetTrajectory({s});
}

double TargetTrajectory::t_begin() const { return segs_.front().t_begin; }
double TargetTrajectory::t_end() const { return segs_.back().t_end; }

const TargetSegment& TargetTrajectory::locate(double t) const {
    if (t < t_begin() - kSeamTol || t > t_end() + kSeamTol)
        throw domain_error("trajectory: t=" + std::to_string(t) + " outside [" +
                           std::to_string(t_begin()) + ", " + std::to_string(t_end()) + "]");
    // a seam point belongs to the segment that starts there
    for (const auto& s : segs_)
        if (t < s.t_end) return s;
    return segs_.back();
}

double TargetTrajectory::value(double t) const { return segment_value(locate(t), t); }
double TargetTrajectory::derivative(double t) const { return segment_derivative(locate(t), t); }

double TargetTrajectory::min_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : segs_) m = std::min(m, segment_min(s));
    return m;
}

TargetTrajectory TargetTrajectory::shifted(double shift) const {
    std::vector<TargetSegment> out = segs_;
    for (auto& s : out) {
        s.t_begin -= shift;
        s.t_end -= shift;
        if (s.kind == TargetSegment::Kind::sinusoid)
            s.phase += s.omega * shift;
    }
    return TargetTrajectory(std::move(out));
}

PerturbedTargets make_perturbed(TargetTrajectory base, double epsilon) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
        throw config_error("perturbed targets: epsilon must be finite and >= 0");
    return PerturbedTargets{std::move(base), epsilon};
}

} // namespace banksim
