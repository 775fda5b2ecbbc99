#include "oscbath/profile.hpp"

#include <algorithm>
#include <cmath>

#include "oscbath/errors.hpp"

namespace oscbath {

namespace {

ProfileSample tabulated_at(const TabulatedProfile& p, double x) {
    const auto& t = p.times;
    if (x < t.front() || x > t.back())
        throw config_error("velocity profile: time outside the tabulated domain");
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    std::size_t hi = it == t.end() ? t.size() - 1 : static_cast<std::size_t>(it - t.begin());
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    const double w = (x - t[lo]) / (t[hi] - t[lo]);
    return {p.values[lo] + w * (p.values[hi] - p.values[lo]),
            p.rates[lo] + w * (p.rates[hi] - p.rates[lo])};
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v))
        throw config_error(std::string("velocity profile: non-finite ") + what);
}

} // namespace

VelocityProfile constant_profile(double v) {
    require_finite(v, "velocity");
    return VelocityProfile{ConstantProfile{v}};
}

VelocityProfile ramp_profile(double v0, double accel) {
    require_finite(v0, "velocity");
    require_finite(accel, "acceleration");
    return VelocityProfile{RampProfile{v0, accel}};
}

VelocityProfile sinusoid_profile(double amplitude, double angular_frequency, double phase) {
    require_finite(amplitude, "amplitude");
    require_finite(angular_frequency, "angular frequency");
    require_finite(phase, "phase");
    return VelocityProfile{SinusoidProfile{amplitude, angular_frequency, phase}};
}

VelocityProfile tabulated_profile(std::vector<double> times, std::vector<double> values) {
    if (times.size() < 2) throw config_error("velocity profile: need at least two nodes");
    if (times.size() != values.size())
        throw config_error("velocity profile: time/value length mismatch");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || !std::isfinite(values[i]))
            throw config_error("velocity profile: non-finite entry");
        if (i > 0 && times[i] <= times[i - 1])
            throw config_error("velocity profile: times must be strictly ascending");
    }
    TabulatedProfile p{std::move(times), std::move(values), {}};
    const std::size_t n = p.times.size();
    p.rates.resize(n);
    p.rates[0] = (p.values[1] - p.values[0]) / (p.times[1] - p.times[0]);
    p.rates[n - 1] = (p.values[n - 1] - p.values[n - 2]) / (p.times[n - 1] - p.times[n - 2]);
    for (std::size_t i = 1; i + 1 < n; ++i)
        p.rates[i] = (p.values[i + 1] - p.values[i - 1]) / (p.times[i + 1] - p.times[i - 1]);
    return VelocityProfile{std::move(p)};
}

ProfileSample velocity_at(const VelocityProfile& profile, double t) {
    if (const auto* c = std::get_if<ConstantProfile>(&profile.form))
        return {c->v, 0.0};
    if (const auto* r = std::get_if<RampProfile>(&profile.form))
        return {r->v0 + r->accel * t, r->accel};
    if (const auto* s = std::get_if<SinusoidProfile>(&profile.form)) {
        const double ph = s->angular_frequency * t + s->phase;
        return {s->amplitude * std::sin(ph),
                s->amplitude * s->angular_frequency * std::cos(ph)};
    }
    return tabulated_at(std::get<TabulatedProfile>(profile.form), t);
}

} // namespace oscbath
