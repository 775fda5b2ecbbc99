#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oscbath/errors.hpp"
#include "oscbath/profile.hpp"
#include "oscbath/thermal.hpp"

using namespace oscbath;

TEST_CASE("closed-form velocity profiles and their rates") {
    const ProfileSample c = velocity_at(constant_profile(1.0), 7.0);
    CHECK(c.v == 1.0);
    CHECK(c.vdot == 0.0);

    const ProfileSample r = velocity_at(ramp_profile(0.0, 2.0), 3.0);
    CHECK(r.v == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(r.vdot == 2.0);

    const ProfileSample s = velocity_at(sinusoid_profile(1.0, 2.0, 0.0), 0.0);
    CHECK(s.v == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(s.vdot == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("tabulated profile interpolates values and rates") {
    const VelocityProfile p = tabulated_profile({0.0, 1.0, 2.0}, {0.0, 1.0, 4.0});
    CHECK(velocity_at(p, 0.0).v == doctest::Approx(0.0).scale(1.0));
    CHECK(velocity_at(p, 0.5).v == doctest::Approx(0.5));
    CHECK(velocity_at(p, 1.5).v == doctest::Approx(2.5));
    CHECK(velocity_at(p, 2.0).v == doctest::Approx(4.0));

    // nodal rates: one-sided 1 at t=0, centered 2 at t=1, one-sided 3 at t=2
    CHECK(velocity_at(p, 0.0).vdot == doctest::Approx(1.0));
    CHECK(velocity_at(p, 1.0).vdot == doctest::Approx(2.0));
    CHECK(velocity_at(p, 2.0).vdot == doctest::Approx(3.0));
    CHECK(velocity_at(p, 0.5).vdot == doctest::Approx(1.5));

    CHECK_THROWS_AS(velocity_at(p, -0.1), config_error);
    CHECK_THROWS_AS(velocity_at(p, 2.1), config_error);
    CHECK_THROWS_AS(tabulated_profile({1.0, 0.5}, {0.0, 0.0}), config_error);
    CHECK_THROWS_AS(tabulated_profile({0.0}, {0.0}), config_error);
    CHECK_THROWS_AS(tabulated_profile({0.0, 1.0}, {0.0}), config_error);
}

TEST_CASE("thermal sampling reproduces the Gaussian moments") {
    const DiscreteBath bath = make_bath({2.0}, {1.0});
    const double kT = 1.0, x0 = 0.5;
    const std::size_t M = 100000;
    const CounterRng root(91);

    double sq = 0.0, sqq = 0.0, sv = 0.0;
    for (std::size_t r = 0; r < M; ++r) {
        CounterRng stream = root.substream(r);
        const BathState st = sample_thermal(bath, kT, x0, 2.0, 0.0, stream);
        sq += st.positions[0];
        sqq += st.positions[0] * st.positions[0];
        sv += st.velocities[0];
        CHECK(st.sampled_at == 0.0);
    }
    const double mean_q = sq / static_cast<double>(M);
    const double var_q = sqq / static_cast<double>(M) - mean_q * mean_q;
    const double mean_v = sv / static_cast<double>(M);

    CHECK(std::abs(mean_q - 0.5) < 0.005);        // 3 sigma/sqrt(M) ~ 0.0047
    CHECK(std::abs(var_q - 0.25) < 0.02 * 0.25);  // kT/(m w^2) = 1/4 within 2%
    CHECK(std::abs(mean_v - 2.0) < 3.0 / std::sqrt(static_cast<double>(M)));
}

TEST_CASE("zero temperature collapses to the exact means") {
    const DiscreteBath bath = make_bath({1.0, 3.0, 0.5}, {1.0, 2.0, 0.3});
    CounterRng stream(7);
    const BathState st = sample_thermal(bath, 0.0, 1.25, -0.75, 2.0, stream);
    for (std::size_t n = 0; n < bath.size(); ++n) {
        CHECK(st.positions[n] == 1.25);
        CHECK(st.velocities[n] == -0.75);
    }
    CHECK(st.sampled_at == 2.0);
}

TEST_CASE("distinct oscillators are sampled independently") {
    const DiscreteBath bath = make_bath({1.0, 2.0}, {1.0, 1.0});
    const std::size_t M = 10000;
    const CounterRng root(123);
    double s0 = 0.0, s1 = 0.0, s01 = 0.0;
    for (std::size_t r = 0; r < M; ++r) {
        CounterRng stream = root.substream(r);
        const BathState st = sample_thermal(bath, 1.0, 0.0, 0.0, 0.0, stream);
        s0 += st.positions[0];
        s1 += st.positions[1];
        s01 += st.positions[0] * st.positions[1];
    }
    const double mm = static_cast<double>(M);
    const double cov = s01 / mm - (s0 / mm) * (s1 / mm);
    const double sigma0 = 1.0, sigma1 = 0.5; // sqrt(kT/(m w^2))
    const double se = sigma0 * sigma1 / std::sqrt(mm);
    CHECK(std::abs(cov) < 3.0 * se);
}

TEST_CASE("translation covariance via two-sample Kolmogorov-Smirnov") {
    const DiscreteBath bath = make_bath({1.0}, {1.0});
    const std::size_t M = 10000;
    const CounterRng rootA(555), rootB(777); // distinct seeds: independent samples
    std::vector<double> a(M), b(M);
    for (std::size_t r = 0; r < M; ++r) {
        CounterRng sa = rootA.substream(r), sb = rootB.substream(r);
        a[r] = sample_thermal(bath, 1.0, 0.0, 0.0, 0.0, sa).positions[0];
        b[r] = sample_thermal(bath, 1.0, 2.0, 0.0, 0.0, sb).positions[0] - 2.0;
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d_stat = 0.0;
    std::size_t i = 0, j = 0;
    while (i < M && j < M) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        const double fa = static_cast<double>(i) / static_cast<double>(M);
        const double fb = static_cast<double>(j) / static_cast<double>(M);
        d_stat = std::max(d_stat, std::abs(fa - fb));
    }
    // 1% significance threshold for equal-size two-sample KS
    const double d_crit = 1.628 * std::sqrt(2.0 / static_cast<double>(M));
    CHECK(d_stat < d_crit);
}

TEST_CASE("equipartition of the sampled potential energy") {
    const DiscreteBath bath =
        make_bath({0.5, 1.0, 2.0, 4.0}, {2.0, 1.0, 0.5, 0.25});
    const double kT = 1.5, x0 = 0.7;
    const std::size_t M = 20000;
    const CounterRng root(31);
    std::vector<double> pe(bath.size(), 0.0);
    for (std::size_t r = 0; r < M; ++r) {
        CounterRng stream = root.substream(r);
        const BathState st = sample_thermal(bath, kT, x0, 0.0, 0.0, stream);
        for (std::size_t n = 0; n < bath.size(); ++n) {
            const double d = st.positions[n] - x0;
            pe[n] += 0.5 * bath.masses[n] * bath.frequencies[n] * bath.frequencies[n] *
                     d * d;
        }
    }
    // relative se of a chi^2_1 mean is sqrt(2/M) ~ 1%; gate at 4 sigma
    for (std::size_t n = 0; n < bath.size(); ++n) {
        const double mean_pe = pe[n] / static_cast<double>(M);
        CHECK(std::abs(mean_pe - 0.5 * kT) < 4.0 * std::sqrt(2.0 / static_cast<double>(M)) *
                                                 0.5 * kT);
    }
}

TEST_CASE("sampling is bit-deterministic in the seed") {
    const DiscreteBath bath = make_bath({1.0, 2.0, 3.0}, {1.0, 1.0, 1.0});
    CounterRng s1(42), s2(42), s3(43);
    const BathState a = sample_thermal(bath, 1.0, 0.0, 0.0, 0.0, s1);
    const BathState b = sample_thermal(bath, 1.0, 0.0, 0.0, 0.0, s2);
    const BathState c = sample_thermal(bath, 1.0, 0.0, 0.0, 0.0, s3);
    for (std::size_t n = 0; n < bath.size(); ++n) {
        CHECK(a.positions[n] == b.positions[n]);
        CHECK(a.velocities[n] == b.velocities[n]);
    }
    bool same = true;
    for (std::size_t n = 0; n < bath.size(); ++n)
        same = same && a.positions[n] == c.positions[n];
    CHECK(!same);
}

TEST_CASE("particle initial-condition spread") {
    ParticleInit mean;
    mean.x0 = 1.0;
    mean.v0 = -2.0;
    CounterRng s(5);
    const ParticleInit exact = sample_particle(mean, 0.0, 0.0, s);
    CHECK(exact.x0 == 1.0);
    CHECK(exact.v0 == -2.0);
    const ParticleInit spread = sample_particle(mean, 0.5, 0.5, s);
    CHECK(spread.x0 != 1.0);
    CHECK(spread.v0 != -2.0);
    CHECK_THROWS_AS(sample_particle(mean, -0.1, 0.0, s), config_error);
}

TEST_CASE("negative temperature is rejected") {
    const DiscreteBath bath = make_bath({1.0}, {1.0});
    CounterRng s(1);
    CHECK_THROWS_AS(sample_thermal(bath, -1.0, 0.0, 0.0, 0.0, s), config_error);
}
