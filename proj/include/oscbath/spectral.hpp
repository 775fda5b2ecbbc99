#pragma once

#include <cstddef>
#include <variant>
#include <vector>

namespace oscbath {

// G(w) = 2*eta / (pi * m * w^2) on (0, cutoff]; the memoryless-friction form.
struct WhiteNoiseDensity {
    double eta;      // friction coefficient [mass/time]
    double osc_mass; // reference oscillator mass m
    double cutoff;   // angular-frequency cutoff
};

// Mass-weighted density sampled on an ascending grid, linearly interpolated,
// zero outside the grid. Values are m*G(w) with the reference mass folded in.
struct TabulatedDensity {
    std::vector<double> omega_grid;
    std::vector<double> g_values;
};

struct SpectralDensity {
    std::variant<WhiteNoiseDensity, TabulatedDensity> form;

    // G(w) for the white-noise form, m*G(w)/1 for tabulated (implicit m = 1).
    double evaluate(double omega) const;
    double cutoff() const;
    double reference_mass() const;
};

SpectralDensity white_noise_density(double eta, double osc_mass, double cutoff);
SpectralDensity tabulated_density(std::vector<double> omega_grid,
                                  std::vector<double> g_values);

enum class CouplingMode {
    Invariant,    // counter-term present: forces depend on q_n - x only
    Perturbative, // bilinear coupling only; breaks translation invariance
};

struct DiscreteBath {
    std::vector<double> frequencies; // w_n > 0
    std::vector<double> masses;      // effective masses m_n > 0
    CouplingMode coupling_mode = CouplingMode::Invariant;

    std::size_t size() const { return frequencies.size(); }
    double max_frequency() const;
    // sum of m_n w_n^2, the total coupling strength (= kernel value at lag 0)
    double coupling_strength() const;
};

// Midpoint-uniform discretization over (0, cutoff]: w_n = (n+1/2)*dw,
// m_n = m*G(w_n)*dw. Cells where the density vanishes are dropped.
DiscreteBath discretize(const SpectralDensity& density, std::size_t n_osc,
                        CouplingMode mode = CouplingMode::Invariant);

// User-supplied finite bath; validates positivity and finiteness.
DiscreteBath make_bath(std::vector<double> frequencies, std::vector<double> masses,
                       CouplingMode mode = CouplingMode::Invariant);

struct Kernel {
    std::vector<double> tau_grid; // uniform, starting at 0
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double step() const; // grid spacing (size >= 2)
};

std::vector<double> uniform_grid(double dt, std::size_t n_points);

// u(tau) = sum_n m_n w_n^2 cos(w_n tau): the retarded friction kernel.
Kernel kernel_u(const DiscreteBath& bath, const std::vector<double>& tau_grid);
Kernel kernel_u(const DiscreteBath& bath, double dt, std::size_t n_points);

// alpha(tau) = sum_n (m_n hbar w_n^3 / 2) coth(hbar w_n / 2 k_B T) cos(w_n tau):
// symmetric noise correlation; -> temperature * u(tau) when hbar*w << k_B T.
// `temperature` is the thermal energy k_B*T.
Kernel kernel_alpha(const DiscreteBath& bath, const std::vector<double>& tau_grid,
                    double temperature, double hbar);
Kernel kernel_alpha(const DiscreteBath& bath, double dt, std::size_t n_points,
                    double temperature, double hbar);

} // namespace oscbath
