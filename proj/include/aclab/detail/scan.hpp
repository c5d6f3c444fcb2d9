// scan.hpp — Scalar extremum/root refinement, least-squares fits, parallel grid evaluation

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "aclab/errors.hpp"

namespace aclab::detail {

inline double absolute_tol(double lo, double hi, double reltol) {
    return reltol * std::max({1.0, std::abs(lo), std::abs(hi)});
}

// Golden-section minimization on [lo, hi]. The bracket is assumed to contain
// a single local minimum; callers locate the bracket with a coarse grid first.
inline double golden_section_min(const std::function<double(double)>& f,
                                 double lo, double hi, double reltol = 1e-8) {
    static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    const double tol = absolute_tol(lo, hi, reltol);
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Bisection root finding; requires a sign change on [lo, hi].
inline double bisect_root(const std::function<double(double)>& f,
                          double lo, double hi, double reltol = 1e-8) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw NumericError("bisect_root: root not bracketed on [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
    const double tol = absolute_tol(lo, hi, reltol);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid; flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2)
        throw ConfigError("linear_fit: need at least two matching samples");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / double(n), my = sy / double(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw ConfigError("linear_fit: degenerate abscissa");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

inline unsigned worker_count(std::size_t jobs) {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("AC_LAB_THREADS")) {
        const long v = std::strtol(cap, nullptr, 10);
        if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
    }
    return std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(jobs, 1)));
}

// Evaluates fn(i) for i in [0, jobs) on a small worker pool. Workers own
// disjoint index ranges and write into caller-owned slots, so results are
// identical to the serial order regardless of worker count.
inline void parallel_for(std::size_t jobs, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = worker_count(jobs);
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (jobs + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(jobs, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace aclab::detail
