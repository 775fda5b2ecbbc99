#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace oscbath {

// Pairwise (cascade) summation in a fixed order; O(log n) error growth and
// bit-identical for a given input regardless of thread count.
inline double pairwise_sum(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::size_t n = v.size();
    while (n > 1) {
        const std::size_t half = n / 2;
        for (std::size_t i = 0; i < half; ++i) v[i] = v[2 * i] + v[2 * i + 1];
        if (n % 2) {
            v[half] = v[n - 1];
            n = half + 1;
        } else {
            n = half;
        }
    }
    return v[0];
}

// Reduction of term(0..n-1) over fixed-size blocks followed by a pairwise
// combine in block order. The grouping never depends on the schedule, so the
// result is bit-identical for any number of OpenMP threads (including a
// serial build); only the wall time changes.
template <class Term>
double blocked_sum(std::size_t n, Term&& term) {
    if (n == 0) return 0.0;
    constexpr std::size_t block = 512;
    const std::size_t nblocks = (n + block - 1) / block;
    std::vector<double> partial(nblocks);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (nblocks > 1)
#endif
    for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * block;
        const std::size_t hi = lo + block < n ? lo + block : n;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[static_cast<std::size_t>(b)] = s;
    }
    return pairwise_sum(std::move(partial));
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

} // namespace oscbath
