#include "oscbath/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oscbath/errors.hpp"
#include "oscbath/parallel.hpp"

namespace oscbath {

namespace {

constexpr double pi = 3.14159265358979323846264338327950288;

double interp_linear(const std::vector<double>& xs, const std::vector<double>& ys,
                     double x) {
    if (x < xs.front() || x > xs.back()) return 0.0;
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.end()) return ys.back();
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    if (hi == 0) return ys.front();
    const std::size_t lo = hi - 1;
    const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + w * (ys[hi] - ys[lo]);
}

void require_uniform_from_zero(const std::vector<double>& grid) {
    if (grid.empty()) throw config_error("kernel grid is empty");
    if (grid.front() != 0.0) throw config_error("kernel grid must start at 0");
    if (grid.size() == 1) return;
    const double dt = grid[1] - grid[0];
    if (!(dt > 0.0)) throw config_error("kernel grid must be increasing");
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double expected = static_cast<double>(k) * dt;
        if (std::abs(grid[k] - expected) > 1e-9 * (1.0 + std::abs(expected)))
            throw config_error("kernel grid must be uniform");
    }
}

// coth(x) for x > 0
double coth(double x) { return 1.0 / std::tanh(x); }

template <class Coefficient>
Kernel cosine_sum_kernel(const DiscreteBath& bath, const std::vector<double>& tau_grid,
                         Coefficient&& coeff) {
    require_uniform_from_zero(tau_grid);
    const std::size_t n_modes = bath.size();
    std::vector<double> c(n_modes);
    for (std::size_t n = 0; n < n_modes; ++n) c[n] = coeff(n);

    Kernel kernel;
    kernel.tau_grid = tau_grid;
    kernel.values.resize(tau_grid.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long k = 0; k < static_cast<long long>(tau_grid.size()); ++k) {
        const double tau = tau_grid[static_cast<std::size_t>(k)];
        double s = 0.0;
        for (std::size_t n = 0; n < n_modes; ++n)
            s += c[n] * std::cos(bath.frequencies[n] * tau);
        kernel.values[static_cast<std::size_t>(k)] = s;
    }
    return kernel;
}

} // namespace

double SpectralDensity::evaluate(double omega) const {
    if (const auto* wn = std::get_if<WhiteNoiseDensity>(&form)) {
        if (omega <= 0.0 || omega > wn->cutoff) return 0.0;
        return 2.0 * wn->eta / (pi * wn->osc_mass * omega * omega);
    }
    const auto& tab = std::get<TabulatedDensity>(form);
    return interp_linear(tab.omega_grid, tab.g_values, omega);
}

double SpectralDensity::cutoff() const {
    if (const auto* wn = std::get_if<WhiteNoiseDensity>(&form)) return wn->cutoff;
    return std::get<TabulatedDensity>(form).omega_grid.back();
}

double SpectralDensity::reference_mass() const {
    if (const auto* wn = std::get_if<WhiteNoiseDensity>(&form)) return wn->osc_mass;
    return 1.0; // tabulated values already carry the mass weight
}

SpectralDensity white_noise_density(double eta, double osc_mass, double cutoff) {
    if (!(eta > 0.0)) throw config_error("white-noise density: eta must be > 0");
    if (!(osc_mass > 0.0))
        throw config_error("white-noise density: oscillator mass must be > 0");
    if (!(cutoff > 0.0) || !std::isfinite(cutoff))
        throw config_error("white-noise density: cutoff must be positive and finite");
    return SpectralDensity{WhiteNoiseDensity{eta, osc_mass, cutoff}};
}

SpectralDensity tabulated_density(std::vector<double> omega_grid,
                                  std::vector<double> g_values) {
    if (omega_grid.empty()) throw config_error("tabulated density: empty grid");
    if (omega_grid.size() != g_values.size())
        throw config_error("tabulated density: grid/value length mismatch");
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        if (!std::isfinite(omega_grid[i]) || !std::isfinite(g_values[i]))
            throw config_error("tabulated density: non-finite entry");
        if (g_values[i] < 0.0)
            throw config_error("tabulated density: negative density value");
        if (i > 0 && omega_grid[i] <= omega_grid[i - 1])
            throw config_error("tabulated density: grid must be strictly ascending");
    }
    if (!(omega_grid.back() > 0.0))
        throw config_error("tabulated density: cutoff must be positive");
    return SpectralDensity{TabulatedDensity{std::move(omega_grid), std::move(g_values)}};
}

double DiscreteBath::max_frequency() const {
    double m = 0.0;
    for (double w : frequencies) m = std::max(m, w);
    return m;
}

double DiscreteBath::coupling_strength() const {
    return blocked_sum(size(), [&](std::size_t n) {
        return masses[n] * frequencies[n] * frequencies[n];
    });
}

DiscreteBath discretize(const SpectralDensity& density, std::size_t n_osc,
                        CouplingMode mode) {
    if (n_osc < 1) throw config_error("discretize: need at least one oscillator");
    const double cutoff = density.cutoff();
    const double m_ref = density.reference_mass();
    const double dw = cutoff / static_cast<double>(n_osc);

    DiscreteBath bath;
    bath.coupling_mode = mode;
    bath.frequencies.reserve(n_osc);
    bath.masses.reserve(n_osc);
    for (std::size_t n = 0; n < n_osc; ++n) {
        const double w = (static_cast<double>(n) + 0.5) * dw;
        const double mass = m_ref * density.evaluate(w) * dw;
        if (mass <= 0.0) continue; // cell where the density vanishes
        if (!std::isfinite(mass)) throw config_error("discretize: non-finite weight");
        bath.frequencies.push_back(w);
        bath.masses.push_back(mass);
    }
    if (bath.frequencies.empty())
        throw config_error("discretize: density vanishes on the whole grid");
    return bath;
}

DiscreteBath make_bath(std::vector<double> frequencies, std::vector<double> masses,
                       CouplingMode mode) {
    if (frequencies.size() != masses.size())
        throw config_error("bath: frequency/mass length mismatch");
    for (std::size_t n = 0; n < frequencies.size(); ++n) {
        if (!(frequencies[n] > 0.0) || !std::isfinite(frequencies[n]))
            throw config_error("bath: frequencies must be positive and finite");
        if (!(masses[n] > 0.0) || !std::isfinite(masses[n]))
            throw config_error("bath: masses must be positive and finite");
    }
    DiscreteBath bath;
    bath.frequencies = std::move(frequencies);
    bath.masses = std::move(masses);
    bath.coupling_mode = mode;
    return bath;
}

double Kernel::step() const {
    if (tau_grid.size() < 2) throw config_error("kernel: grid too short for a step");
    return tau_grid[1] - tau_grid[0];
}

std::vector<double> uniform_grid(double dt, std::size_t n_points) {
    if (!(dt > 0.0)) throw config_error("grid: dt must be > 0");
    if (n_points == 0) throw config_error("grid: need at least one point");
    std::vector<double> g(n_points);
    for (std::size_t k = 0; k < n_points; ++k) g[k] = static_cast<double>(k) * dt;
    return g;
}

Kernel kernel_u(const DiscreteBath& bath, const std::vector<double>& tau_grid) {
    return cosine_sum_kernel(bath, tau_grid, [&](std::size_t n) {
        return bath.masses[n] * bath.frequencies[n] * bath.frequencies[n];
    });
}

Kernel kernel_u(const DiscreteBath& bath, double dt, std::size_t n_points) {
    return kernel_u(bath, uniform_grid(dt, n_points));
}

Kernel kernel_alpha(const DiscreteBath& bath, const std::vector<double>& tau_grid,
                    double temperature, double hbar) {
    if (!(temperature > 0.0)) throw config_error("noise kernel: temperature must be > 0");
    if (!(hbar > 0.0)) throw config_error("noise kernel: hbar must be > 0");
    return cosine_sum_kernel(bath, tau_grid, [&](std::size_t n) {
        const double w = bath.frequencies[n];
        return 0.5 * bath.masses[n] * hbar * w * w * w *
               coth(0.5 * hbar * w / temperature);
    });
}

Kernel kernel_alpha(const DiscreteBath& bath, double dt, std::size_t n_points,
                    double temperature, double hbar) {
    return kernel_alpha(bath, uniform_grid(dt, n_points), temperature, hbar);
}

} // namespace oscbath
