// Monte Carlo result type: value, standard error, sample count, the stream
// that produced it, and the derived 95% confidence interval.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spectra/parallel.hpp"
#include "spectra/rng.hpp"

namespace spectra {

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    RngStream seed{0, 0};
    std::array<double, 2> ci95{0.0, 0.0};
};

inline Estimate make_estimate(double value, double std_error, std::uint64_t samples,
                              const RngStream& seed) {
    if (std_error < 0.0) throw std::invalid_argument("make_estimate: negative standard error");
    Estimate e;
    e.value = value;
    e.std_error = std_error;
    e.samples = samples;
    e.seed = seed;
    e.ci95 = {value - 1.96 * std_error, value + 1.96 * std_error};
    return e;
}

/// Sample mean and its standard error (sample standard deviation / sqrt(N)),
/// accumulated with compensated summation in index order.
inline Estimate mean_estimate(const std::vector<double>& values, const RngStream& seed) {
    if (values.empty()) throw std::invalid_argument("mean_estimate: no samples");
    KahanSum s;
    for (double v : values) s.add(v);
    const double n = static_cast<double>(values.size());
    const double mean = s.value() / n;
    double se = 0.0;
    if (values.size() > 1) {
        KahanSum sq;
        for (double v : values) {
            const double d = v - mean;
            sq.add(d * d);
        }
        const double var = sq.value() / (n - 1.0);
        se = std::sqrt(std::max(0.0, var) / n);
    }
    return make_estimate(mean, se, values.size(), seed);
}

/// Binomial proportion with its exact standard error sqrt(p(1-p)/N).
inline Estimate proportion_estimate(std::uint64_t hits, std::uint64_t trials,
                                    const RngStream& seed) {
    if (trials == 0) throw std::invalid_argument("proportion_estimate: no trials");
    const double p = static_cast<double>(hits) / static_cast<double>(trials);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return make_estimate(p, se, trials, seed);
}

/// Combined standard error of the difference of two independent estimates.
inline double combined_se(const Estimate& a, const Estimate& b) {
    return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

} // namespace spectra
