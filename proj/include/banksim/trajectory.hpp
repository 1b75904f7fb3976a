#pragma once

#include <cstddef>
#include <vector>

namespace banksim {

// Piecewise ideal-bank (target) trajectory. Segments tile [t_begin, t_end]
// contiguously and must meet continuously at the seams. Linear segments take
// their intercept at the segment start; sinusoids are phased in absolute time:
// value = offset + amplitude * sin(omega*t + phase).
struct TargetSegment {
    enum class Kind { constant, linear, sinusoid };
    Kind kind = Kind::constant;
    double t_begin = 0.0;
    double t_end = 0.0;
    double value = 0.0;      // constant level / linear value at t_begin
    double slope = 0.0;      // linear
    double amplitude = 0.0;  // sinusoid
    double omega = 0.0;      // sinusoid, angular
    double phase = 0.0;      // sinusoid
    double offset = 0.0;     // sinusoid
};

class TargetTrajectory {
public:
    TargetTrajectory() = default;
    // Validates ordering, contiguity and continuity at seams (config_error).
    explicit TargetTrajectory(std::vector<TargetSegment> segments);

    static TargetTrajectory constant(double t0, double t1, double value);
    static TargetTrajectory linear(double t0, double t1, double slope, double value_at_start);
    static TargetTrajectory sinusoid(double t0, double t1, double amplitude,
                                     double omega, double phase, double offset);

    double t_begin() const;
    double t_end() const;

    // Value / time derivative; a seam belongs to the later segment, so the
    // derivative there is the right derivative. Throws domain_error outside
    // [t_begin, t_end].
    double value(double t) const;
    double derivative(double t) const;

    // Exact minimum of the trajectory over its domain (interior sinusoid
    // extrema included).
    double min_value() const;

    // Same trajectory expressed in a time axis shifted by -shift
    // (new domain [t_begin - shift, t_end - shift]).
    TargetTrajectory shifted(double shift) const;

    const std::vector<TargetSegment>& segments() const { return segs_; }

private:
    const TargetSegment& locate(double t) const;
    std::vector<TargetSegment> segs_;
};

// Target band: base +/- epsilon. upper() is what banks are steered toward,
// lower() is the floor the support mechanism reacts to.
struct PerturbedTargets {
    TargetTrajectory base;
    double epsilon = 0.0;

    double upper(double t) const { return base.value(t) + epsilon; }
    double lower(double t) const { return base.value(t) - epsilon; }
    double upper_derivative(double t) const { return base.derivative(t); }
};

PerturbedTargets make_perturbed(TargetTrajectory base, double epsilon);

} // namespace banksim
