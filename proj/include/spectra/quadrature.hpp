// Quadrature rules: Gauss-Legendre nodes by Newton iteration on the Legendre
// recurrence, and chi-square expectations via generalized Gauss-Laguerre
// nodes from the Golub-Welsch eigenproblem (reusing the symmetric
// eigensolver). All rules are deterministic.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spectra/eigen_sym.hpp"
#include "spectra/sym_matrix.hpp"

namespace spectra {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// m-point Gauss-Legendre rule on [-1, 1].
inline QuadratureRule gauss_legendre(int m) {
    if (m < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(m));
    rule.weights.resize(static_cast<std::size_t>(m));
    const double pi = std::acos(-1.0);
    // Roots come in symmetric pairs; solve for the nonnegative half.
    const int half = (m + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(pi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 1; k < m; ++k) {
                const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // One clean-up Newton step after convergence to settle the weight.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 1; k < m; ++k) {
            const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
            p0 = p1;
            p1 = p2;
        }
        dp = m * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.nodes[static_cast<std::size_t>(m - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(m - 1 - i)] = w;
    }
    return rule;
}

/// Gauss-Legendre rule mapped to [a, b].
inline QuadratureRule gauss_legendre_mapped(int m, double a, double b) {
    if (!(a < b)) throw std::invalid_argument("gauss_legendre_mapped: need a < b");
    QuadratureRule rule = gauss_legendre(m);
    const double mid = 0.5 * (a + b);
    const double halfwidth = 0.5 * (b - a);
    for (auto& x : rule.nodes) x = mid + halfwidth * x;
    for (auto& w : rule.weights) w *= halfwidth;
    return rule;
}

/// Rule for expectations against the chi-square distribution with k degrees
/// of freedom: E g(W) = sum_i weights[i] * g(nodes[i]), weights summing to 1.
/// Built from the generalized Gauss-Laguerre Jacobi matrix (weight
/// s^alpha e^{-s}, alpha = k/2 - 1) after the substitution w = 2s; the
/// normalized first eigenvector components give probability weights directly.
inline QuadratureRule chi2_expectation_rule(int k, int m) {
    if (k < 1) throw std::invalid_argument("chi2_expectation_rule: degrees of freedom must be >= 1");
    if (m < 1) throw std::invalid_argument("chi2_expectation_rule: need at least one node");
    const double alpha = 0.5 * k - 1.0;
    SymMatrix jacobi(m);
    for (int i = 0; i < m; ++i) {
        jacobi.set(i, i, 2.0 * i + alpha + 1.0);
        if (i + 1 < m) jacobi.set(i, i + 1, std::sqrt((i + 1.0) * (i + 1.0 + alpha)));
    }
    const EigenSystem sys = eigh_sym(jacobi);
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(m));
    rule.weights.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double v0 = sys.vector(0, i);
        rule.nodes[static_cast<std::size_t>(i)] = 2.0 * sys.values[static_cast<std::size_t>(i)];
        rule.weights[static_cast<std::size_t>(i)] = v0 * v0;
    }
    return rule;
}

} // namespace spectra
