#pragma once

#include <variant>
#include <vector>

namespace oscbath {

struct ConstantProfile {
    double v;
};

struct RampProfile {
    double v0;
    double accel;
};

// v(t) = amplitude * sin(angular_frequency * t + phase)
struct SinusoidProfile {
    double amplitude;
    double angular_frequency;
    double phase;
};

// Linear interpolation on [times.front(), times.back()]; the rate is built
// from centered differences at interior nodes, one-sided at the ends.
struct TabulatedProfile {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> rates; // nodal dv/dt, filled by tabulated_profile()
};

// Drift velocity of the environment, v_env(t), with its rate of change.
struct VelocityProfile {
    std::variant<ConstantProfile, RampProfile, SinusoidProfile, TabulatedProfile> form;
};

struct ProfileSample {
    double v;    // v_env(t)
    double vdot; // d v_env / dt
};

VelocityProfile constant_profile(double v);
VelocityProfile ramp_profile(double v0, double accel);
VelocityProfile sinusoid_profile(double amplitude, double angular_frequency, double phase);
VelocityProfile tabulated_profile(std::vector<double> times, std::vector<double> values);

ProfileSample velocity_at(const VelocityProfile& profile, double t);

} // namespace oscbath
