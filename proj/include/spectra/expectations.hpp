// Expected singular-point counts and the concentration experiment. The
// expected total count has the exact closed form n(n-1); the expected
// boundary count has an integral form reduced here to one Gaussian
// expectation for Monte Carlo and, for n = 4, to a one-dimensional integral
// evaluated by quadrature against the exact value 6 - 4/sqrt(3).

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "spectra/eigen_sym.hpp"
#include "spectra/estimate.hpp"
#include "spectra/goe.hpp"
#include "spectra/parallel.hpp"
#include "spectra/quadrature.hpp"
#include "spectra/rng.hpp"

namespace spectra {

struct QuadratureSpec {
    int nodes = 64;           // Gauss-Legendre nodes per unit-width panel group
    double truncation = 24.0; // upper integration bound for the outer variable
    double rel_tol = 1e-8;
};

/// Expected number of symmetroid singular points: exactly n(n-1).
inline long long expected_rho(int n) {
    if (n < 1) throw std::invalid_argument("expected_rho: need n >= 1");
    return static_cast<long long>(n) * (n - 1);
}

/// Expected number of singular points on the spectrahedron boundary,
/// estimated by Monte Carlo from the reduction
///   E sigma_n = (2^n/n!) C(n,2) E[ 1{lambda_min(Q) >= u} prod_i (lambda_i(Q)-u)^2 ],
/// with Q ~ GOE(n-2) and u ~ Normal(0, 1/2); sampling u this way absorbs
/// the Gaussian weight e^{-u^2} and its mass sqrt(pi) exactly. GOE(0) is
/// the empty matrix (determinant 1, PSD condition vacuous), which makes the
/// n = 2 case exact with zero variance.
inline Estimate expected_sigma_mc(int n, std::uint64_t samples, const RngStream& stream,
                                  int workers = 0) {
    if (n < 2) throw std::invalid_argument("expected_sigma_mc: need n >= 2");
    if (samples < 1) throw std::invalid_argument("expected_sigma_mc: need at least one sample");
    double prefactor = static_cast<double>(n) * (n - 1) / 2.0;  // C(n,2)
    for (int i = 1; i <= n; ++i) prefactor *= 2.0 / i;          // 2^n / n!
    std::vector<double> vals(samples, 0.0);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    parallel_for(samples, resolve_workers(workers), [&](std::size_t i) {
        RngEngine rng(stream.child(i));
        const double u = rng.normal() * inv_sqrt2;
        if (n == 2) {
            vals[i] = prefactor;
            return;
        }
        const SymMatrix q = goe_sample(n - 2, rng);
        const auto lam = eigenvalues_sym(q);
        if (lam.front() < u) {
            vals[i] = 0.0;
            return;
        }
        double prod = 1.0;
        for (double l : lam) {
            const double d = l - u;
            prod *= d * d;
        }
        vals[i] = prefactor * prod;
    });
    return mean_estimate(vals, stream);
}

namespace detail {

/// Integrand of the quartic boundary-count integral after the inner
/// antiderivative is applied: with c = a^2/4,
///   e^{-3a^2/8} * (e^c (c^2 - 2c + 2) - 2)
/// rewritten as e^{-a^2/8}(c^2-2c+2) - 2 e^{-3a^2/8} to avoid large
/// intermediate exponentials.
inline double quartic_integrand(double a) {
    const double c = 0.25 * a * a;
    return std::exp(-0.125 * a * a) * ((c - 2.0) * c + 2.0) - 2.0 * std::exp(-0.375 * a * a);
}

/// Upper bound for the absolute truncation tail of the quartic integral
/// from T to infinity (before the 2/sqrt(2 pi) prefactor), via integration
/// by parts and Mills-ratio bounds.
inline double quartic_tail_bound(double t) {
    if (t <= 0.0) return std::numeric_limits<double>::infinity();
    const double e1 = std::exp(-0.125 * t * t);
    const double e3 = std::exp(-0.375 * t * t);
    const double poly = (4.0 * t * t * t + 48.0 * t + 192.0 / t) / 16.0;  // for a^4/16 term
    const double const_term = 8.0 / t;                                     // for the +2 term
    const double neg_term = 8.0 / (3.0 * t);                               // for the -2 e^{-3a^2/8} term
    return e1 * (poly + const_term) + e3 * neg_term;
}

inline double quartic_panels(const QuadratureSpec& spec, int nodes) {
    KahanSum total;
    const double panel_width = 4.0;
    double lo = 0.0;
    while (lo < spec.truncation - 1e-12) {
        const double hi = std::min(lo + panel_width, spec.truncation);
        const QuadratureRule rule = gauss_legendre_mapped(nodes, lo, hi);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            total.add(rule.weights[i] * quartic_integrand(rule.nodes[i]));
        lo = hi;
    }
    return total.value();
}

} // namespace detail

/// The n = 4 expected boundary count by deterministic quadrature:
/// (2/sqrt(2 pi)) * Int_0^inf e^{-3a^2/8} (Int_0^{a^2/4} s^2 e^s ds) da,
/// the inner integral in the closed form e^c(c^2-2c+2) - 2 with c = a^2/4.
/// Errors out if the truncation tail exceeds the tolerance; self-validates
/// by doubling the node count.
inline double quartic_sigma_quadrature(const QuadratureSpec& spec = {}) {
    if (spec.nodes < 2 || spec.truncation <= 0.0 || spec.rel_tol <= 0.0)
        throw std::invalid_argument("quartic_sigma_quadrature: invalid spec");
    const double prefactor = 2.0 / std::sqrt(2.0 * std::acos(-1.0));
    const double v1 = prefactor * detail::quartic_panels(spec, spec.nodes);
    const double v2 = prefactor * detail::quartic_panels(spec, 2 * spec.nodes);
    const double scale = std::max(1.0, std::abs(v2));
    const double tail = prefactor * detail::quartic_tail_bound(spec.truncation);
    if (tail > spec.rel_tol * scale)
        throw std::invalid_argument(
            "quartic_sigma_quadrature: truncation bound too small for the target tolerance");
    if (std::abs(v1 - v2) > spec.rel_tol * scale)
        throw std::runtime_error("quartic_sigma_quadrature: node doubling failed to stabilize");
    return v2;
}

struct ConcentrationRow {
    int n = 0;
    Estimate estimate;  // mean of |lambda_min(Q)/sqrt(2n) + 1|
};

/// Monte Carlo means of |scaled smallest eigenvalue + 1| per dimension; the
/// scaled minimum concentrates at -1, so the means decay with n.
inline std::vector<ConcentrationRow> concentration_experiment(const std::vector<int>& n_list,
                                                              std::uint64_t samples,
                                                              const RngStream& stream,
                                                              int workers = 0) {
    if (samples < 1) throw std::invalid_argument("concentration_experiment: need at least one sample");
    std::vector<ConcentrationRow> rows;
    rows.reserve(n_list.size());
    for (std::size_t r = 0; r < n_list.size(); ++r) {
        const int n = n_list[r];
        if (n < 2) throw std::invalid_argument("concentration_experiment: need each n >= 2");
        const RngStream sub = stream.child(r);
        std::vector<double> vals(samples, 0.0);
        parallel_for(samples, resolve_workers(workers), [&](std::size_t i) {
            RngEngine rng(sub.child(i));
            vals[i] = std::abs(lambda_min_scaled(goe_sample(n, rng)) + 1.0);
        });
        rows.push_back({n, mean_estimate(vals, sub)});
    }
    return rows;
}

/// Least-squares slope of log(mean) against log(n).
inline double loglog_slope(const std::vector<ConcentrationRow>& rows) {
    if (rows.size() < 2) throw std::invalid_argument("loglog_slope: need at least two rows");
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    const double m = static_cast<double>(rows.size());
    for (const auto& row : rows) {
        if (!(row.estimate.value > 0.0))
            throw std::invalid_argument("loglog_slope: nonpositive mean");
        const double x = std::log(static_cast<double>(row.n));
        const double y = std::log(row.estimate.value);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

} // namespace spectra
