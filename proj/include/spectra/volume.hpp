// Relative volume of the random spectrahedron: Monte Carlo hit counting on
// the sphere, the closed-form expectation through the Student-t CDF of the
// scaled smallest GOE eigenvalue, and the naive span-model emptiness
// experiment.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spectra/eigen_sym.hpp"
#include "spectra/estimate.hpp"
#include "spectra/goe.hpp"
#include "spectra/parallel.hpp"
#include "spectra/pencil.hpp"
#include "spectra/rng.hpp"
#include "spectra/special_functions.hpp"

namespace spectra {

/// Fraction of uniform points on S^ell where A(x) is PSD, with binomial
/// standard error. Per-sample substreams make the result independent of the
/// worker count.
inline Estimate volume_mc(const Pencil& p, std::uint64_t samples, const RngStream& stream,
                          int workers = 0) {
    if (samples < 1) throw std::invalid_argument("volume_mc: need at least one sample");
    std::vector<std::uint8_t> hit(samples, 0);
    parallel_for(samples, resolve_workers(workers), [&](std::size_t i) {
        RngEngine rng(stream.child(i));
        const SpherePoint x = sample_sphere(p.ell, rng);
        hit[i] = membership(p, x) ? 1 : 0;
    });
    std::uint64_t hits = 0;
    for (std::uint8_t h : hit) hits += h;
    return proportion_estimate(hits, samples, stream);
}

/// Monte Carlo mean of F_ell(lambda_min(Q)/sqrt(2n)) over GOE(n) draws,
/// where F_ell is the Student-t CDF with ell degrees of freedom. Equals the
/// expected relative volume of the spectrahedron.
inline Estimate expected_volume_closed(int n, int ell, std::uint64_t samples,
                                       const RngStream& stream, int workers = 0) {
    if (n < 1 || ell < 1) throw std::invalid_argument("expected_volume_closed: need n, ell >= 1");
    if (samples < 1) throw std::invalid_argument("expected_volume_closed: need at least one sample");
    std::vector<double> vals(samples, 0.0);
    parallel_for(samples, resolve_workers(workers), [&](std::size_t i) {
        RngEngine rng(stream.child(i));
        const SymMatrix q = goe_sample(n, rng);
        vals[i] = student_t_cdf(ell, lambda_min_scaled(q));
    });
    return mean_estimate(vals, stream);
}

/// Limit of the expected relative volume as n and ell grow: Phi(-1).
inline double volume_asymptote() {
    return normal_cdf(-1.0);
}

namespace detail {

/// Multistart projected-gradient ascent of lambda_min(Q(d)) over the unit
/// sphere of directions. Returns the best value found; a heuristic lower
/// bound for the true maximum. The supergradient at d is the vector of
/// Rayleigh quotients v^T Q_k v with v a unit eigenvector of the smallest
/// eigenvalue.
inline double max_lambda_min_on_sphere(const Pencil& p, int restarts, RngEngine& rng) {
    if (p.ell == 1) {
        // S^0 = {+1, -1}; evaluate both exactly.
        const auto vals = eigenvalues_sym(p.Q[0]);
        return std::max(vals.front(), -vals.back());
    }
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> d(static_cast<std::size_t>(p.ell));
    std::vector<double> grad(static_cast<std::size_t>(p.ell));
    for (int r = 0; r < restarts; ++r) {
        {
            const SpherePoint start = sample_sphere(p.ell - 1, rng);
            d = start.coords;
        }
        double fval = 0.0;
        for (int it = 0; it < 200; ++it) {
            SpherePoint dp;
            dp.coords = d;
            const SymMatrix q = direction_Q(p, dp);
            const EigenSystem sys = eigh_sym(q);
            fval = sys.values.front();
            std::vector<double> v(static_cast<std::size_t>(p.n));
            for (int i = 0; i < p.n; ++i) v[static_cast<std::size_t>(i)] = sys.vector(i, 0);
            double dot = 0.0;
            for (int k = 0; k < p.ell; ++k) {
                grad[static_cast<std::size_t>(k)] =
                    p.Q[static_cast<std::size_t>(k)].quadratic_form(v.data(), v.data());
            }
            for (int k = 0; k < p.ell; ++k) dot += grad[static_cast<std::size_t>(k)] * d[static_cast<std::size_t>(k)];
            double tangent_norm = 0.0;
            for (int k = 0; k < p.ell; ++k) {
                grad[static_cast<std::size_t>(k)] -= dot * d[static_cast<std::size_t>(k)];
                tangent_norm += grad[static_cast<std::size_t>(k)] * grad[static_cast<std::size_t>(k)];
            }
            tangent_norm = std::sqrt(tangent_norm);
            if (tangent_norm < 1e-12 * std::max(1.0, std::abs(fval))) break;
            // Backtracking ascent step along the tangent direction.
            bool improved = false;
            double step = 1.0 / std::max(1.0, tangent_norm);
            for (int bt = 0; bt < 40; ++bt) {
                std::vector<double> cand(static_cast<std::size_t>(p.ell));
                double s = 0.0;
                for (int k = 0; k < p.ell; ++k) {
                    cand[static_cast<std::size_t>(k)] =
                        d[static_cast<std::size_t>(k)] + step * grad[static_cast<std::size_t>(k)];
                    s += cand[static_cast<std::size_t>(k)] * cand[static_cast<std::size_t>(k)];
                }
                const double inv = 1.0 / std::sqrt(s);
                for (double& c : cand) c *= inv;
                SpherePoint cp;
                cp.coords = cand;
                const double fc = lambda_min(direction_Q(p, cp));
                if (fc > fval) {
                    d = cand;
                    fval = fc;
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!improved) break;
            if (fval > 0.0) break;
        }
        best = std::max(best, fval);
        if (best >= 0.0) break;
    }
    return best;
}

} // namespace detail

/// Fraction of span-model trials (no identity term: is some combination of
/// the Q_i alone PSD?) where multistart ascent finds a nonnegative smallest
/// eigenvalue. Heuristic: ascent can miss the optimum, so the rate is a
/// lower bound for the true nonemptiness probability.
inline Estimate naive_model_nonempty_rate(int n, int ell, std::uint64_t trials, int restarts,
                                          const RngStream& stream, int workers = 0) {
    if (trials < 1) throw std::invalid_argument("naive_model_nonempty_rate: need at least one trial");
    if (restarts < 1) throw std::invalid_argument("naive_model_nonempty_rate: need at least one restart");
    std::vector<std::uint8_t> hit(trials, 0);
    parallel_for(trials, resolve_workers(workers), [&](std::size_t i) {
        const RngStream sub = stream.child(i);
        const Pencil p = sample_pencil(n, ell, sub.child(0));
        RngEngine rng(sub.child(1));
        hit[i] = detail::max_lambda_min_on_sphere(p, restarts, rng) >= 0.0 ? 1 : 0;
    });
    std::uint64_t hits = 0;
    for (std::uint8_t h : hit) hits += h;
    return proportion_estimate(hits, trials, stream);
}

} // namespace spectra
