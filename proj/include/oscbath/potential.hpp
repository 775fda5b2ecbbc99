#pragma once

#include <variant>
#include <vector>

namespace oscbath {

struct FreePotential {};

// V(x) = (1/2) M omega0^2 x^2; the trap frequency scales with particle mass.
struct HarmonicPotential {
    double omega0;
};

// f(x) tabulated on an ascending grid, linearly interpolated, with an
// optional multiplicative time modulation g(t) (empty tables mean g = 1).
// Positions outside the grid are a configuration error.
struct TabulatedForce {
    std::vector<double> x_grid;
    std::vector<double> f_values;
    std::vector<double> time_grid;
    std::vector<double> time_factor;
};

struct Potential {
    std::variant<FreePotential, HarmonicPotential, TabulatedForce> form;

    double force(double x, double t, double mass) const;  // f = -dV/dx
    double energy(double x, double t, double mass) const; // V(x,t)
};

Potential free_potential();
Potential harmonic_potential(double omega0);
Potential tabulated_force(std::vector<double> x_grid, std::vector<double> f_values,
                          std::vector<double> time_grid = {},
                          std::vector<double> time_factor = {});

struct ParticleSpec {
    double mass = 1.0;
    Potential potential = free_potential();
};

} // namespace oscbath
