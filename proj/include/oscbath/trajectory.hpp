#pragma once

#include <cstddef>
#include <vector>

namespace oscbath {

// Particle sample path on the uniform grid t0 + k*dt, k = 0..n.
struct Trajectory {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> x;
    std::vector<double> v;
    std::vector<double> energy; // empty unless recording was requested

    std::size_t size() const { return x.size(); }
    double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
};

} // namespace oscbath
