#include "oscbath/influence.hpp"

#include <cmath>

#include "oscbath/errors.hpp"
#include "oscbath/parallel.hpp"

namespace oscbath {

namespace {

constexpr double pi = 3.14159265358979323846264338327950288;

void check_grids(const Kernel& u, const Kernel& a, const PathPair& path) {
    const std::size_t K = path.size();
    if (K < 2) throw config_error("influence phase: path needs at least two points");
    if (path.xi.size() != K) throw config_error("influence phase: X/xi length mismatch");
    if (!(path.dt > 0.0)) throw config_error("influence phase: path step must be > 0");
    for (const Kernel* k : {&u, &a}) {
        if (k->size() < K)
            throw config_error("influence phase: kernel grid does not cover all lags");
        if (std::abs(k->step() - path.dt) > 1e-9 * path.dt)
            throw config_error("influence phase: kernel step does not match the path");
    }
}

// centered differences inside, three-point one-sided at the ends (exact for
// quadratics, which keeps the boost identity at round-off level)
std::vector<double> path_derivative(const std::vector<double>& X, double dt) {
    const std::size_t n = X.size();
    std::vector<double> d(n);
    if (n == 2) {
        d[0] = d[1] = (X[1] - X[0]) / dt;
        return d;
    }
    d[0] = (-3.0 * X[0] + 4.0 * X[1] - X[2]) / (2.0 * dt);
    d[n - 1] = (3.0 * X[n - 1] - 4.0 * X[n - 2] + X[n - 3]) / (2.0 * dt);
    for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (X[k + 1] - X[k - 1]) / (2.0 * dt);
    return d;
}

} // namespace

std::complex<double> thermal_density_matrix(const ThermalOscillator& osc, double q,
                                            double q_prime, double center,
                                            double v_env) {
    if (!(osc.mass > 0.0) || !(osc.omega > 0.0) || !(osc.beta > 0.0) || !(osc.hbar > 0.0))
        throw config_error("thermal oscillator: all parameters must be > 0");

    const double bo = osc.beta * osc.hbar * osc.omega;
    const double kappa =
        std::sqrt(osc.mass * osc.omega * std::tanh(0.5 * bo) / (pi * osc.hbar));
    // coth/csch form stays finite for large beta*hbar*omega
    const double coth = 1.0 / std::tanh(bo);
    const double csch = 1.0 / std::sinh(bo);
    const double dq = q - center;
    const double dqp = q_prime - center;
    const double expo = -0.5 * osc.mass * osc.omega / osc.hbar *
                        ((dq * dq + dqp * dqp) * coth - 2.0 * dq * dqp * csch);
    const double phase = osc.mass * v_env * (q - q_prime) / osc.hbar;
    return kappa * std::exp(expo) * std::complex<double>(std::cos(phase), std::sin(phase));
}

InfluencePhase influence_phase(const Kernel& kernel_u, const Kernel& kernel_alpha,
                               const PathPair& path, const VelocityProfile& profile) {
    check_grids(kernel_u, kernel_alpha, path);

    const std::size_t n = path.size();
    const double dt = path.dt;
    const double* u = kernel_u.values.data();
    const double* a = kernel_alpha.values.data();
    const double* xi = path.xi.data();

    const std::vector<double> Xdot = path_derivative(path.X, dt);
    std::vector<double> w(n), c(n, 1.0);
    c[0] = c[n - 1] = 0.5;
    for (std::size_t k = 0; k < n; ++k)
        w[k] = Xdot[k] - velocity_at(profile, path.t0 + static_cast<double>(k) * dt).v;

    // Each row k is an independent inner sum; rows are combined pairwise in a
    // fixed order, so the result is thread-count independent.
    std::vector<double> row_re(n, 0.0), row_im(n, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long kk = 0; kk < static_cast<long long>(n); ++kk) {
        const std::size_t k = static_cast<std::size_t>(kk);
        // dissipative part: trapezoid over s <= t, diagonal weight 1/2
        if (k >= 1) {
            double inner = 0.5 * u[k] * w[0] + 0.5 * u[0] * w[k];
            for (std::size_t j = 1; j < k; ++j) inner += u[k - j] * w[j];
            row_re[k] = c[k] * xi[k] * inner;
        }
        // noise part: positive-semidefinite symmetrized form, folded onto the
        // lower triangle
        double inner_a = 0.5 * c[k] * a[0] * xi[k];
        for (std::size_t j = 0; j < k; ++j) inner_a += c[j] * a[k - j] * xi[j];
        row_im[k] = c[k] * xi[k] * inner_a;
    }

    InfluencePhase result;
    result.real_part = dt * dt * pairwise_sum(std::move(row_re));
    result.imag_part = dt * dt * pairwise_sum(std::move(row_im));
    return result;
}

} // namespace oscbath
