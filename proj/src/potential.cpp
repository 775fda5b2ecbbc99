#include "oscbath/potential.hpp"

#include <algorithm>
#include <cmath>

#include "oscbath/errors.hpp"

namespace oscbath {

namespace {

// position of x in the grid plus interpolation weight; throws outside
std::pair<std::size_t, double> locate(const std::vector<double>& xs, double x,
                                      const char* what) {
    if (x < xs.front() || x > xs.back())
        throw config_error(std::string("potential: ") + what + " outside the tabulated domain");
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t hi = it == xs.end() ? xs.size() - 1 : static_cast<std::size_t>(it - xs.begin());
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    return {lo, (x - xs[lo]) / (xs[hi] - xs[lo])};
}

double time_modulation(const TabulatedForce& tf, double t) {
    if (tf.time_grid.empty()) return 1.0;
    const auto [lo, w] = locate(tf.time_grid, t, "time");
    return tf.time_factor[lo] + w * (tf.time_factor[lo + 1] - tf.time_factor[lo]);
}

} // namespace

double Potential::force(double x, double t, double mass) const {
    if (std::holds_alternative<FreePotential>(form)) return 0.0;
    if (const auto* h = std::get_if<HarmonicPotential>(&form))
        return -mass * h->omega0 * h->omega0 * x;
    const auto& tf = std::get<TabulatedForce>(form);
    const auto [lo, w] = locate(tf.x_grid, x, "position");
    const double f = tf.f_values[lo] + w * (tf.f_values[lo + 1] - tf.f_values[lo]);
    return f * time_modulation(tf, t);
}

double Potential::energy(double x, double t, double mass) const {
    if (std::holds_alternative<FreePotential>(form)) return 0.0;
    if (const auto* h = std::get_if<HarmonicPotential>(&form))
        return 0.5 * mass * h->omega0 * h->omega0 * x * x;
    // V(x) = -int f dx from the left edge of the table (trapezoid, exact for
    // the piecewise-linear force), modulated in time like the force.
    const auto& tf = std::get<TabulatedForce>(form);
    const auto [lo, w] = locate(tf.x_grid, x, "position");
    double acc = 0.0;
    for (std::size_t i = 0; i < lo; ++i)
        acc += 0.5 * (tf.f_values[i] + tf.f_values[i + 1]) * (tf.x_grid[i + 1] - tf.x_grid[i]);
    const double f_here = tf.f_values[lo] + w * (tf.f_values[lo + 1] - tf.f_values[lo]);
    acc += 0.5 * (tf.f_values[lo] + f_here) * (x - tf.x_grid[lo]);
    return -acc * time_modulation(tf, t);
}

Potential free_potential() { return Potential{FreePotential{}}; }

Potential harmonic_potential(double omega0) {
    if (!(omega0 >= 0.0) || !std::isfinite(omega0))
        throw config_error("potential: trap frequency must be finite and >= 0");
    return Potential{HarmonicPotential{omega0}};
}

Potential tabulated_force(std::vector<double> x_grid, std::vector<double> f_values,
                          std::vector<double> time_grid, std::vector<double> time_factor) {
    if (x_grid.size() < 2) throw config_error("potential: need at least two force nodes");
    if (x_grid.size() != f_values.size())
        throw config_error("potential: grid/force length mismatch");
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        if (!std::isfinite(x_grid[i]) || !std::isfinite(f_values[i]))
            throw config_error("potential: non-finite entry");
        if (i > 0 && x_grid[i] <= x_grid[i - 1])
            throw config_error("potential: x grid must be strictly ascending");
    }
    if (time_grid.size() != time_factor.size())
        throw config_error("potential: time grid/factor length mismatch");
    if (!time_grid.empty() && time_grid.size() < 2)
        throw config_error("potential: need at least two time nodes");
    for (std::size_t i = 1; i < time_grid.size(); ++i)
        if (time_grid[i] <= time_grid[i - 1])
            throw config_error("potential: time grid must be strictly ascending");
    return Potential{TabulatedForce{std::move(x_grid), std::move(f_values),
                                    std::move(time_grid), std::move(time_factor)}};
}

} // namespace oscbath
