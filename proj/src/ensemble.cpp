#include "oscbath/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oscbath/errors.hpp"
#include "oscbath/parallel.hpp"

namespace oscbath {

namespace {

// Realizations are reduced in fixed chunks of 64; chunks are computed in
// parallel waves and merged strictly in chunk order, so the report is
// bit-identical for any thread count.
constexpr std::size_t kChunk = 64;

struct ChunkAccum {
    std::size_t count = 0;
    std::vector<double> sx, sxx, sv, svv, smsd;
    std::vector<double> sR, sRR; // coarse noise grid moments

    bool failed = false;
    std::size_t fail_realization = 0;
    std::size_t fail_step = 0;
    std::string fail_msg;

    void reset(std::size_t n_points, std::size_t n_noise) {
        count = 0;
        failed = false;
        sx.assign(n_points, 0.0);
        sxx.assign(n_points, 0.0);
        sv.assign(n_points, 0.0);
        svv.assign(n_points, 0.0);
        smsd.assign(n_points, 0.0);
        sR.assign(n_noise, 0.0);
        sRR.assign(n_noise * n_noise, 0.0);
    }

    void add(const Trajectory& traj, const std::vector<double>& noise_values) {
        ++count;
        const double x0 = traj.x[0];
        for (std::size_t k = 0; k < traj.size(); ++k) {
            const double x = traj.x[k];
            const double v = traj.v[k];
            const double d = x - x0;
            sx[k] += x;
            sxx[k] += x * x;
            sv[k] += v;
            svv[k] += v * v;
            smsd[k] += d * d;
        }
        const std::size_t G = sR.size();
        for (std::size_t g = 0; g < G; ++g) {
            sR[g] += noise_values[g];
            for (std::size_t h = 0; h < G; ++h)
                sRR[g * G + h] += noise_values[g] * noise_values[h];
        }
    }

    void merge(const ChunkAccum& o) {
        count += o.count;
        for (std::size_t k = 0; k < sx.size(); ++k) {
            sx[k] += o.sx[k];
            sxx[k] += o.sxx[k];
            sv[k] += o.sv[k];
            svv[k] += o.svv[k];
            smsd[k] += o.smsd[k];
        }
        for (std::size_t g = 0; g < sR.size(); ++g) sR[g] += o.sR[g];
        for (std::size_t i = 0; i < sRR.size(); ++i) sRR[i] += o.sRR[i];
    }
};

double sample_se(double sum, double sum_sq, std::size_t m) {
    if (m < 2) return 0.0;
    const double mm = static_cast<double>(m);
    double var = (sum_sq - sum * sum / mm) / (mm - 1.0);
    if (var < 0.0) var = 0.0;
    return std::sqrt(var / mm);
}

double sample_var(double sum, double sum_sq, std::size_t m) {
    if (m < 2) return 0.0;
    const double mm = static_cast<double>(m);
    double var = (sum_sq - sum * sum / mm) / (mm - 1.0);
    return var < 0.0 ? 0.0 : var;
}

// Run `work(chunk_index, accum&)` over all chunks in parallel waves, merging
// in chunk order into `total`. Throws the divergence with the smallest
// realization index if any chunk failed.
template <class Work>
void reduce_chunks(std::size_t n_chunks, std::size_t n_points, std::size_t n_noise,
                   ChunkAccum& total, Work&& work) {
    total.reset(n_points, n_noise);
    const std::size_t wave =
        std::min<std::size_t>(n_chunks, 4 * static_cast<std::size_t>(max_threads()) + 4);
    std::vector<ChunkAccum> slots(wave);

    bool any_failed = false;
    std::size_t fail_realization = static_cast<std::size_t>(-1);
    std::size_t fail_step = 0;
    std::string fail_msg;

    for (std::size_t start = 0; start < n_chunks && !any_failed; start += wave) {
        const std::size_t end = std::min(n_chunks, start + wave);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (long long c = static_cast<long long>(start); c < static_cast<long long>(end);
             ++c) {
            ChunkAccum& slot = slots[static_cast<std::size_t>(c) - start];
            slot.reset(n_points, n_noise);
            work(static_cast<std::size_t>(c), slot);
        }
        for (std::size_t c = start; c < end; ++c) {
            const ChunkAccum& slot = slots[c - start];
            if (slot.failed) {
                if (slot.fail_realization < fail_realization) {
                    fail_realization = slot.fail_realization;
                    fail_step = slot.fail_step;
                    fail_msg = slot.fail_msg;
                }
                any_failed = true;
            } else {
                total.merge(slot);
            }
        }
    }
    if (any_failed)
        throw divergence_error(
            "realization " + std::to_string(fail_realization) + ": " + fail_msg, fail_step);
}

} // namespace

EnsembleReport run_ensemble(const EnsembleSpec& spec, std::size_t realizations,
                            std::uint64_t base_seed) {
    if (realizations < 1) throw config_error("ensemble: need at least one realization");
    if (!(spec.dt > 0.0) || spec.n_steps < 1)
        throw config_error("ensemble: integrator grid not set");
    if (spec.temperature < 0.0) throw config_error("ensemble: negative temperature");
    const bool needs_bath = spec.kind == SimKind::Full || spec.kind == SimKind::Gle;
    if (needs_bath && spec.bath.size() == 0)
        throw config_error("ensemble: bath dynamics without a bath");

    const std::size_t n_points = spec.n_steps + 1;

    // shared read-only pieces
    Kernel ku;
    if (spec.kind == SimKind::Gle) ku = kernel_u(spec.bath, spec.dt, n_points);

    const bool noise_tables = spec.kind == SimKind::Gle && spec.collect_noise_moments;
    std::vector<std::size_t> noise_idx;
    if (noise_tables) {
        const std::size_t G = std::max<std::size_t>(
            2, std::min(spec.noise_grid_max, n_points));
        for (std::size_t g = 0; g < G; ++g)
            noise_idx.push_back(g * spec.n_steps / (G - 1));
    }
    const std::size_t G = noise_idx.size();

    const CounterRng root(base_seed);
    const std::size_t n_chunks = (realizations + kChunk - 1) / kChunk;

    ChunkAccum total;
    reduce_chunks(n_chunks, n_points, G, total, [&](std::size_t c, ChunkAccum& slot) {
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(realizations, lo + kChunk);
        std::vector<double> noise_at_grid(G, 0.0);
        for (std::size_t r = lo; r < hi; ++r) {
            CounterRng stream = root.substream(r);
            try {
                const ParticleInit init =
                    sample_particle(spec.init, spec.x_width, spec.v_width, stream);
                Trajectory traj;
                if (spec.kind == SimKind::LangevinWhite) {
                    traj = integrate_langevin_white(spec.particle, spec.eta,
                                                    spec.temperature, init, spec.profile,
                                                    spec.dt, spec.n_steps, stream, spec.t0);
                } else {
                    const BathState state = sample_thermal(
                        spec.bath, spec.temperature, init.x0,
                        velocity_at(spec.profile, spec.t0).v, spec.t0, stream);
                    if (spec.kind == SimKind::Full) {
                        traj = integrate_full(spec.particle, spec.bath, state, init,
                                              spec.profile, spec.dt, spec.n_steps);
                    } else {
                        const NoiseRecord noise =
                            noise_force(spec.bath, state, init.x0, spec.profile, spec.dt,
                                        n_points);
                        for (std::size_t g = 0; g < G; ++g)
                            noise_at_grid[g] = noise.values[noise_idx[g]];
                        traj = integrate_gle(spec.particle, ku, noise, init, spec.profile,
                                             spec.dt, spec.n_steps);
                    }
                }
                slot.add(traj, noise_at_grid);
            } catch (const divergence_error& e) {
                if (!slot.failed) {
                    slot.failed = true;
                    slot.fail_realization = r;
                    slot.fail_step = e.step;
                    slot.fail_msg = e.what();
                }
                return;
            }
        }
    });

    EnsembleReport report;
    report.realizations = realizations;
    report.t0 = spec.t0;
    report.dt = spec.dt;
    report.se_defined = realizations > 1;
    report.mean_x.resize(n_points);
    report.se_x.resize(n_points);
    report.mean_v.resize(n_points);
    report.var_v.resize(n_points);
    report.msd.resize(n_points);
    const double M = static_cast<double>(realizations);
    for (std::size_t k = 0; k < n_points; ++k) {
        report.mean_x[k] = total.sx[k] / M;
        report.se_x[k] = sample_se(total.sx[k], total.sxx[k], realizations);
        report.mean_v[k] = total.sv[k] / M;
        report.var_v[k] = sample_var(total.sv[k], total.svv[k], realizations);
        report.msd[k] = total.smsd[k] / M;
    }

    if (noise_tables) {
        report.noise_times.resize(G);
        report.noise_mean.resize(G);
        report.noise_mean_se.resize(G);
        report.noise_cov.resize(G * G);
        report.noise_target.resize(G * G);
        for (std::size_t g = 0; g < G; ++g) {
            report.noise_times[g] = spec.t0 + static_cast<double>(noise_idx[g]) * spec.dt;
            report.noise_mean[g] = total.sR[g] / M;
            // se from the diagonal second moment
            report.noise_mean_se[g] =
                sample_se(total.sR[g], total.sRR[g * G + g], realizations);
            for (std::size_t h = 0; h < G; ++h) {
                report.noise_cov[g * G + h] = total.sRR[g * G + h] / M;
                const std::size_t lag =
                    noise_idx[g] > noise_idx[h] ? noise_idx[g] - noise_idx[h]
                                                : noise_idx[h] - noise_idx[g];
                report.noise_target[g * G + h] = spec.temperature * ku.values[lag];
            }
        }
    }

    if (spec.drift_checks) {
        if (spec.kind != SimKind::LangevinWhite)
            throw config_error("ensemble: drift checks are defined for the white-noise dynamics");
        const double v_env = velocity_at(spec.profile, spec.t0).v;
        const double expected = spec.eta / spec.particle.mass;
        std::vector<double> times(n_points);
        for (std::size_t k = 0; k < n_points; ++k)
            times[k] = spec.t0 + static_cast<double>(k) * spec.dt;
        const double fitted = fit_relaxation_rate(times, report.mean_v, v_env, expected);
        const double rate_err = std::abs(fitted - expected) / expected;
        report.gates.push_back(
            {"relaxation_rate_rel_error", rate_err, spec.rate_tolerance,
             rate_err <= spec.rate_tolerance});

        const double se_end = std::sqrt(report.var_v.back() / M);
        const double drift_dev = std::abs(report.mean_v.back() - v_env);
        report.gates.push_back({"stationary_mean_velocity_deviation", drift_dev,
                                3.0 * se_end, drift_dev <= 3.0 * se_end});
    }
    return report;
}

FdtReport fdt_check(const DiscreteBath& bath, double temperature, std::size_t realizations,
                    double t0, double dt, std::size_t n_points,
                    const VelocityProfile& profile, std::uint64_t base_seed,
                    double tolerance) {
    if (realizations < 100) throw config_error("fdt check: need at least 100 realizations");
    if (n_points < 2 || n_points > 1024)
        throw config_error("fdt check: grid must have 2..1024 points");
    if (!(dt > 0.0)) throw config_error("fdt check: dt must be > 0");
    if (temperature < 0.0) throw config_error("fdt check: negative temperature");
    if (bath.size() == 0) throw config_error("fdt check: empty bath");

    const std::size_t N = bath.size();
    const std::size_t G = n_points;

    // fixed grid: trig tables once, each realization is a pure FMA sweep
    std::vector<double> cos_t(N * G), sin_t(N * G);
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t g = 0; g < G; ++g) {
            const double arg = bath.frequencies[n] * static_cast<double>(g) * dt;
            cos_t[n * G + g] = std::cos(arg);
            sin_t[n * G + g] = std::sin(arg);
        }

    const double v_env0 = velocity_at(profile, t0).v;
    const CounterRng root(base_seed);
    const std::size_t n_chunks = (realizations + kChunk - 1) / kChunk;

    // second pass accumulators for the covariance standard errors
    std::vector<double> sRRsq_total(G * G, 0.0);
    std::vector<double> sRsq_total(G, 0.0);

    ChunkAccum total;
    {
        // local accumulators for the squares, merged in the same chunk order
        std::vector<std::vector<double>> sq_slots;
        const std::size_t wave =
            std::min<std::size_t>(n_chunks, 4 * static_cast<std::size_t>(max_threads()) + 4);
        sq_slots.assign(wave, {});

        total.reset(0, G);
        std::vector<ChunkAccum> slots(wave);
        for (std::size_t start = 0; start < n_chunks; start += wave) {
            const std::size_t end = std::min(n_chunks, start + wave);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
            for (long long c = static_cast<long long>(start);
                 c < static_cast<long long>(end); ++c) {
                const std::size_t slot_i = static_cast<std::size_t>(c) - start;
                ChunkAccum& slot = slots[slot_i];
                slot.reset(0, G);
                std::vector<double>& sq = sq_slots[slot_i];
                sq.assign(G * G + G, 0.0);

                const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
                const std::size_t hi = std::min(realizations, lo + kChunk);
                std::vector<double> R(G), ac(N), as(N);
                for (std::size_t r = lo; r < hi; ++r) {
                    CounterRng stream = root.substream(r);
                    const BathState state =
                        sample_thermal(bath, temperature, 0.0, v_env0, t0, stream);
                    for (std::size_t n = 0; n < N; ++n) {
                        const double w = bath.frequencies[n];
                        const double mw2 = bath.masses[n] * w * w;
                        ac[n] = mw2 * state.positions[n];
                        as[n] = mw2 * (state.velocities[n] - v_env0) / w;
                    }
                    for (std::size_t g = 0; g < G; ++g) {
                        double s = 0.0;
                        for (std::size_t n = 0; n < N; ++n)
                            s += ac[n] * cos_t[n * G + g] + as[n] * sin_t[n * G + g];
                        R[g] = s;
                    }
                    ++slot.count;
                    for (std::size_t g = 0; g < G; ++g) {
                        slot.sR[g] += R[g];
                        sq[G * G + g] += R[g] * R[g];
                        for (std::size_t h = 0; h < G; ++h) {
                            const double p = R[g] * R[h];
                            slot.sRR[g * G + h] += p;
                            sq[g * G + h] += p * p;
                        }
                    }
                }
            }
            for (std::size_t c = start; c < end; ++c) {
                total.merge(slots[c - start]);
                const std::vector<double>& sq = sq_slots[c - start];
                for (std::size_t i = 0; i < G * G; ++i) sRRsq_total[i] += sq[i];
                for (std::size_t g = 0; g < G; ++g) sRsq_total[g] += sq[G * G + g];
            }
        }
    }

    FdtReport report;
    report.tolerance = tolerance;
    report.times.resize(G);
    report.mean_R.resize(G);
    report.se_R.resize(G);
    report.cov.resize(G * G);
    report.cov_se.resize(G * G);
    report.target.resize(G * G);

    const Kernel ku = kernel_u(bath, dt, G);
    const double M = static_cast<double>(realizations);
    const double scale = temperature * ku.values[0];

    for (std::size_t g = 0; g < G; ++g) {
        report.times[g] = t0 + static_cast<double>(g) * dt;
        report.mean_R[g] = total.sR[g] / M;
        report.se_R[g] = sample_se(total.sR[g], sRsq_total[g], realizations);
    }
    double max_sigmas = 0.0, max_dev = 0.0;
    bool all_zero = true;
    for (std::size_t g = 0; g < G; ++g) {
        if (report.mean_R[g] != 0.0) all_zero = false;
        if (report.se_R[g] > 0.0)
            max_sigmas = std::max(max_sigmas, std::abs(report.mean_R[g]) / report.se_R[g]);
        for (std::size_t h = 0; h < G; ++h) {
            const std::size_t i = g * G + h;
            report.cov[i] = total.sRR[i] / M;
            report.cov_se[i] = sample_se(total.sRR[i], sRRsq_total[i], realizations);
            const std::size_t lag = g > h ? g - h : h - g;
            report.target[i] = temperature * ku.values[lag];
            if (report.cov[i] != 0.0) all_zero = false;
            if (scale > 0.0) {
                const double dev =
                    (std::abs(report.cov[i] - report.target[i]) - 3.0 * report.cov_se[i]) /
                    scale;
                max_dev = std::max(max_dev, dev);
            }
        }
    }
    if (temperature == 0.0) {
        report.max_mean_sigmas = 0.0;
        report.max_cov_dev = 0.0;
        report.mean_pass = all_zero;
        report.cov_pass = all_zero;
    } else {
        report.max_mean_sigmas = max_sigmas;
        report.max_cov_dev = max_dev;
        report.mean_pass = max_sigmas <= 3.0;
        report.cov_pass = max_dev <= tolerance;
    }
    return report;
}

TrajectoryDistance compare_trajectories(const Trajectory& a, const Trajectory& b) {
    if (a.size() != b.size() || a.size() == 0)
        throw config_error("trajectory comparison: length mismatch");
    if (std::abs(a.dt - b.dt) > 1e-9 * a.dt ||
        std::abs(a.t0 - b.t0) > 1e-9 * (1.0 + std::abs(a.t0)))
        throw config_error("trajectory comparison: grid mismatch");
    double sum_sq = 0.0, max_abs = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a.x[k] - b.x[k];
        sum_sq += d * d;
        max_abs = std::max(max_abs, std::abs(d));
    }
    return {std::sqrt(sum_sq / static_cast<double>(a.size())), max_abs};
}

double fit_linear_slope(const std::vector<double>& t, const std::vector<double>& y,
                        std::size_t i_lo, std::size_t i_hi) {
    if (i_hi >= t.size() || i_lo >= i_hi || t.size() != y.size())
        throw config_error("linear fit: bad index window");
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    const double n = static_cast<double>(i_hi - i_lo + 1);
    for (std::size_t k = i_lo; k <= i_hi; ++k) {
        st += t[k];
        sy += y[k];
        stt += t[k] * t[k];
        sty += t[k] * y[k];
    }
    return (sty - st * sy / n) / (stt - st * st / n);
}

namespace {

// weighted SSE of y ~ y_inf + A exp(-r (t - t0)) over t - t0 <= window
double relaxation_sse(const std::vector<double>& t, const std::vector<double>& y,
                      double y_inf, double A, double r, double window, bool weighted,
                      double r_weight) {
    const double t_start = t.front();
    double s = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k) {
        const double tt = t[k] - t_start;
        if (tt > window) break;
        const double resid = y[k] - y_inf - A * std::exp(-r * tt);
        // inverse of the variance growth of an exponentially relaxing mean
        const double wgt = weighted ? 1.0 / (1.0 - std::exp(-2.0 * r_weight * tt)) : 1.0;
        s += wgt * resid * resid;
    }
    return s;
}

} // namespace

double fit_relaxation_rate(const std::vector<double>& t, const std::vector<double>& y,
                           double y_inf, double rate_guess) {
    if (t.size() != y.size() || t.size() < 4)
        throw config_error("relaxation fit: need matching series with >= 4 points");
    if (!(rate_guess > 0.0)) throw config_error("relaxation fit: rate guess must be > 0");
    const double A = y.front() - y_inf;
    if (A == 0.0) throw config_error("relaxation fit: zero initial deviation");

    // pass 1: coarse scan around the guess, early window, unit weights
    double best_r = rate_guess, best_s = -1.0;
    for (int i = 0; i <= 200; ++i) {
        const double r = rate_guess * (0.5 + static_cast<double>(i) / 200.0);
        const double s = relaxation_sse(t, y, y_inf, A, r, 3.0 / rate_guess, false, 0.0);
        if (best_s < 0.0 || s < best_s) {
            best_s = s;
            best_r = r;
        }
    }

    // pass 2: golden-section refinement with variance weights
    const double window = 5.0 / best_r;
    double lo = 0.7 * best_r, hi = 1.3 * best_r;
    const double gr = 0.61803398874989484820;
    double m1 = hi - gr * (hi - lo), m2 = lo + gr * (hi - lo);
    double f1 = relaxation_sse(t, y, y_inf, A, m1, window, true, best_r);
    double f2 = relaxation_sse(t, y, y_inf, A, m2, window, true, best_r);
    for (int i = 0; i < 80 && hi - lo > 1e-12 * best_r; ++i) {
        if (f1 <= f2) {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - gr * (hi - lo);
            f1 = relaxation_sse(t, y, y_inf, A, m1, window, true, best_r);
        } else {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + gr * (hi - lo);
            f2 = relaxation_sse(t, y, y_inf, A, m2, window, true, best_r);
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace oscbath
